#include "slelab/rng.hpp"

#include <cmath>

namespace slelab {

double GaussianSampler::next_uniform() {
    // 53-bit mantissa from the top bits of one 64-bit draw.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
}

} // namespace slelab
