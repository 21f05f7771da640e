#include "oamlab/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace oamlab {

int worker_count() {
    if (const char* env = std::getenv("OAMLAB_THREADS")) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
        if (ec == std::errc() && v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace oamlab
