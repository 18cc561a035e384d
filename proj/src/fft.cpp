#include "phasepos/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace phasepos::fft {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution of distinct
// plans is. Guard the planner only.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cvec& v) {
    return reinterpret_cast<fftw_complex*>(v.data());
}

} // namespace

void dft_2d(cvec& data, int n_rows, int n_cols, int sign) {
    if (static_cast<int>(data.size()) != n_rows * n_cols)
        throw std::invalid_argument("dft_2d: size mismatch");
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(n_rows, n_cols, as_fftw(data), as_fftw(data),
                                sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

void dft_along_rows(cvec& data, int n_rows, int n_cols, int sign) {
    if (static_cast<int>(data.size()) != n_rows * n_cols)
        throw std::invalid_argument("dft_along_rows: size mismatch");
    // Column j is the strided sequence data[i*n_cols + j], i = 0..n_rows-1.
    int n[] = {n_rows};
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_many_dft(1, n, n_cols, as_fftw(data), nullptr, n_cols, 1,
                                  as_fftw(data), nullptr, n_cols, 1, sign,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

void dft_along_cols(cvec& data, int n_rows, int n_cols, int sign) {
    if (static_cast<int>(data.size()) != n_rows * n_cols)
        throw std::invalid_argument("dft_along_cols: size mismatch");
    int n[] = {n_cols};
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_many_dft(1, n, n_rows, as_fftw(data), nullptr, 1, n_cols,
                                  as_fftw(data), nullptr, 1, n_cols, sign,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

} // namespace phasepos::fft
