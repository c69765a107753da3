#pragma once

namespace entlab {

struct KummerSeries {
    double value = 0.0;
    int terms = 0;
    // Rough relative error bound from cancellation: eps * max|term| / |sum|.
    double error_estimate = 0.0;
    // Absolute rounding bound eps * max|term| (times e^x after the transform).
    double abs_error = 0.0;
};

// Confluent hypergeometric function 1F1(a; b; x) by its power series,
// using the Kummer transform for x < 0 (unless a is a non-positive
// integer, where the series is a polynomial with same-sign terms).
double kummer_1f1(double a, double b, double x);
KummerSeries kummer_1f1_series(double a, double b, double x);

// 1F1(-mu; 1/2; x2) for large mu from the Bessel-type expansion with two
// correction orders. Requires mu >= 10.
double kummer_1f1_large_order(double mu, double x2);

// Local amplitude e^{x2/2} Gamma(1+mu) / (Gamma(mu+1/2) sqrt(mu)) of the
// large-order oscillation, used to measure errors near zeros.
double large_order_envelope(double mu, double x2);

// Leading cosine term only: envelope * cos(2 sqrt(mu x2)).
double kummer_1f1_leading_cosine(double mu, double x2);

}  // namespace entlab
