#ifndef SLELAB_SLITMAPS_HPP
#define SLELAB_SLITMAPS_HPP

#include <cmath>
#include <complex>

#include "slelab/types.hpp"

namespace slelab {

/// Square root branch with nonnegative imaginary part (maps C minus
/// [0,inf) to the closed upper half plane). This is the branch under which
/// the Loewner slit maps send the upper half plane to itself.
inline Complex sqrt_upper(Complex w) {
    Complex s = std::sqrt(w);
    if (s.imag() < 0.0) s = -s;
    return s;
}

/// One forward chordal Loewner step of duration dt with constant driving u:
/// maps H minus the vertical slit [u, u + 2i*sqrt(dt)] onto H.
inline Complex chordal_step_forward(Complex z, double u, double dt) {
    const Complex d = z - u;
    return u + sqrt_upper(d * d + 4.0 * dt);
}

/// Inverse of chordal_step_forward: H -> H minus the vertical slit.
inline Complex chordal_step_backward(Complex w, double u, double dt) {
    const Complex d = w - u;
    return u + sqrt_upper(d * d - 4.0 * dt);
}

inline Complex chordal_step_backward_deriv(Complex w, double u, double dt) {
    const Complex d = w - u;
    return d / sqrt_upper(d * d - 4.0 * dt);
}

/// Koebe-type auxiliary m(y) = y / (1+y)^2, univalent on the disk onto
/// C minus [1/4, inf). The radial Loewner step with constant driving w
/// satisfies m(g_t(z)/w) = e^t m(z/w).
inline Complex radial_m(Complex y) {
    const Complex q = 1.0 + y;
    return y / (q * q);
}

inline Complex radial_m_deriv(Complex y) {
    const Complex q = 1.0 + y;
    return (1.0 - y) / (q * q * q);
}

/// Inverse of radial_m on C minus [1/4, inf), chosen so minv(0) = 0.
/// Written in a cancellation-free form.
inline Complex radial_minv(Complex v) {
    const Complex r = std::sqrt(1.0 - 4.0 * v); // principal; cut avoided by domain
    return 2.0 * v / (1.0 - 2.0 * v + r);
}

/// One backward radial Loewner step: disk -> disk minus a radial slit at
/// boundary angle `angle`, capacity increment dt. The driving point
/// exp(i*angle) maps to the slit tip.
inline Complex radial_step_backward(Complex zeta, double angle, double dt) {
    const Complex w = std::polar(1.0, angle);
    const Complex v = std::exp(-dt) * radial_m(zeta / w);
    return w * radial_minv(v);
}

inline Complex radial_step_backward_deriv(Complex zeta, double angle, double dt) {
    const Complex w = std::polar(1.0, angle);
    const Complex y = zeta / w;
    const Complex v = std::exp(-dt) * radial_m(y);
    const Complex img = radial_minv(v);
    // d/dzeta [w * minv(e^{-dt} m(zeta/w))] via inverse-function rule.
    return std::exp(-dt) * radial_m_deriv(y) / radial_m_deriv(img);
}

/// Tip of the backward radial step (image of the driving point), closed form.
inline Complex radial_step_tip(double angle, double dt) {
    const Complex w = std::polar(1.0, angle);
    return w * radial_minv(Complex(std::exp(-dt) / 4.0, 0.0));
}

/// Forward radial step (inverse of radial_step_backward) for points that
/// are not swallowed by the slit.
inline Complex radial_step_forward(Complex z, double angle, double dt) {
    const Complex w = std::polar(1.0, angle);
    const Complex v = std::exp(dt) * radial_m(z / w);
    return w * radial_minv(v);
}

} // namespace slelab

#endif
