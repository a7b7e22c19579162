#ifndef SLELAB_VERSION_HPP
#define SLELAB_VERSION_HPP

namespace slelab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace slelab

#endif
