#ifndef SLELAB_MAP_IMPL_HPP
#define SLELAB_MAP_IMPL_HPP

#include <json.hpp>

#include "slelab/conformal.hpp"
#include "slelab/types.hpp"

namespace slelab::detail {

/// Internal polymorphic backend of ConformalMap.
class MapImpl {
public:
    virtual ~MapImpl() = default;
    virtual Complex eval(Complex z) const = 0;
    virtual Complex deriv(Complex z) const = 0;
    virtual SourceDomain source() const = 0;
    virtual MapKind kind() const = 0;
    virtual bool bounded() const = 0;
    virtual double diameter() const = 0;
    virtual nlohmann::json descriptor() const = 0;
};

Complex json_to_complex(const nlohmann::json& j);
nlohmann::json json_from_complex(Complex z);

ConformalMap boundary_fitted_from_json(const nlohmann::json& j);

} // namespace slelab::detail

#endif
