#pragma once

#include "entlab/ensembles.hpp"

namespace entlab {

// Ensemble complexity parameter. Y0 is the value of the separable reference
// (the constant first column plus c0); Y - Y0 is the complexity accumulated
// by the remaining columns and is what parameter inversion targets.
struct ComplexityPoint {
    double Y = 0.0;
    double Y0 = 0.0;
    double gamma = 0.0;
    double c0 = 0.0;
    double M = 0.0;

    double excess() const { return Y - Y0; }
};

ComplexityPoint complexity_from_spec(const EnsembleSpec& spec, double gamma, double c0 = 0.0);

// Closed forms for BE, PE, EE. Agree with complexity_from_spec.
ComplexityPoint complexity_closed_form(Family family, const FamilyParams& params, int N,
                                       int N_nu, double gamma, double c0 = 0.0, int beta = 1);

// Supremum of Y - Y0 reachable by the BE/PE/EE families (attained only in
// the ergodic limit).
double max_reachable_excess(int N, int N_nu, double gamma, int beta = 1);

// Find family parameters whose Y - Y0 equals target_excess. For EE the
// returned a, b keep a / b = ee_ratio.
FamilyParams invert_to_parameter(Family family, double target_excess, int N, int N_nu,
                                 double gamma, int beta = 1, double ee_ratio = 1.0);

}  // namespace entlab
