#include "rfid/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "rfid/error.hpp"

namespace rfid {

namespace {

class PlanCache
{
  public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t nx, std::size_t ny, FftDirection dir)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(nx, ny, dir);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        // Planning with FFTW_ESTIMATE never touches the buffer contents.
        auto* scratch = fftw_alloc_complex(nx * ny);
        fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), scratch,
                                          scratch,
                                          dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (!plan)
            throw Error("FFT planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, FftDirection>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

}  // namespace

void fft2d(std::span<std::complex<double>> data, std::size_t nx, std::size_t ny, FftDirection dir)
{
    if (data.size() != nx * ny || nx == 0 || ny == 0)
        throw Error("FFT buffer does not match its shape");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cache().get(nx, ny, dir), buf, buf);
}

}  // namespace rfid
