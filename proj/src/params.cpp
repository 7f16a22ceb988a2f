#include "memsfbp/params.hpp"

#include <cmath>

#include "memsfbp/errors.hpp"

namespace memsfbp {

void Params::validate(bool allow_zero_eps) const {
    if (!(eps > 0.0) && !(allow_zero_eps && eps == 0.0)) {
        throw ValidationError("Params: eps must be > 0 (= 0 only in the narrow-gap model)");
    }
    if (!(lambda >= 0.0) || !(mu >= 0.0)) {
        throw ValidationError("Params: lambda and mu must be >= 0");
    }
}

Params physical_to_dimensionless(const PhysicalParams& p) {
    const double entries[] = {p.length_l, p.width_w,  p.gap_d,
                              p.voltage,  p.tension1, p.tension2,
                              p.permittivity_rel, p.permittivity_vac};
    for (double e : entries) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw ValidationError("physical_to_dimensionless: all physical parameters must be strictly positive");
        }
    }
    Params out;
    out.eps = 2.0 * p.gap_d / p.length_l;
    const double common = p.permittivity_vac * p.permittivity_rel * p.voltage * p.voltage *
                          p.length_l * p.length_l / (8.0 * p.gap_d * p.gap_d * p.gap_d);
    out.lambda = common / p.tension1;
    out.mu = common / p.tension2;
    return out;
}

void GapParams::validate() const {
    if (!(kappa > 0.0 && kappa < 0.5)) {
        throw ValidationError("GapParams: kappa must lie in (0, 1/2)");
    }
    if (!(touchdown_gap > 0.0 && touchdown_gap < 2.0 * kappa)) {
        throw ValidationError("GapParams: need 0 < touchdown_gap < 2*kappa");
    }
}

} // namespace memsfbp
