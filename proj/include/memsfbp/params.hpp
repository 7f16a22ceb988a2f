#pragma once

namespace memsfbp {

/// Dimensionless model parameters. eps is the aspect ratio (gap over half
/// length); lambda and mu scale the electrostatic load on the upper and
/// lower membrane. eps = 0 is accepted only by the narrow-gap model.
struct Params {
    double eps = 0.1;
    double lambda = 0.0;
    double mu = 0.0;

    /// Throws ValidationError on negative entries (or eps <= 0 unless
    /// allow_zero_eps).
    void validate(bool allow_zero_eps = false) const;
};

/// Device data in SI units.
struct PhysicalParams {
    double length_l = 1e-4;          // device length l [m]
    double width_w = 1e-4;           // width w [m]
    double gap_d = 1e-6;             // initial gap d [m]
    double voltage = 1.0;            // source voltage V_s [V]
    double tension1 = 0.1;           // surface tension T_1 [N/m]
    double tension2 = 0.1;           // surface tension T_2 [N/m]
    double permittivity_rel = 1.0;   // eps_r
    double permittivity_vac = 8.854e-12;  // eps_0 [F/m]
};

/// Nondimensionalization:
///   eps    = 2 d / l
///   lambda = eps_0 eps_r V_s^2 l^2 / (8 T_1 d^3)
///   mu     = eps_0 eps_r V_s^2 l^2 / (8 T_2 d^3)
/// Throws ValidationError if any physical parameter is not strictly positive.
Params physical_to_dimensionless(const PhysicalParams& p);

/// Admissible-set gap parameter and the numerical touchdown threshold.
struct GapParams {
    double kappa = 0.25;          // in (0, 1/2)
    double touchdown_gap = 1e-3;  // 0 < touchdown_gap < 2*kappa

    void validate() const;
};

} // namespace memsfbp
