#pragma once
#include <string>

#include "lognls/grid.hpp"

namespace lognls {

// All scalar quantities of one field at one omega. Column order for CSV:
// omega, charge, kinetic, entropy, energy, action, nehari, luxemburg,
// h1_norm, w_norm.
struct FunctionalReport {
    double omega = 0.0;
    double charge = 0.0;
    double kinetic = 0.0;
    double entropy = 0.0;
    double energy = 0.0;
    double action = 0.0;
    double nehari = 0.0;
    double luxemburg = 0.0;
    double h1_norm = 0.0;
    double w_norm = 0.0;

    std::string csv_header() const;
    std::string csv_row() const;
    std::string to_json() const;
};

double charge(const Field& f);
double entropy_term(const Field& f);  // integral of |u|^2 log|u|^2, 0*log0 = 0
double energy(const Field& f);        // (kinetic - entropy)/2
double action(const Field& f, double omega);
double nehari(const Field& f, double omega);

// Young-function split of F(s) = s^2 log s^2 into B - A. Both branches of A
// meet at s = exp(-3) with equal value and first derivative.
double a_pointwise(double s);
double b_pointwise(double s);
double a_branch_small(double s);        // -s^2 log s^2
double a_branch_large(double s);        // 3s^2 + 4e^-3 s - e^-6
double a_prime_branch_small(double s);  // -2s log s^2 - 2s
double a_prime_branch_large(double s);  // 6s + 4e^-3

double luxemburg_norm(const Field& f);  // k with integral A(|u|/k) = 1; 0 for u=0
double orlicz_modular(const Field& f);  // integral of A(|u|)
double h1_norm(const Field& f);         // sqrt(charge + kinetic)
double w_norm(const Field& f);          // h1_norm + luxemburg_norm

// RHS - LHS of the logarithmic Sobolev inequality at parameter alpha:
// (alpha^2/pi)*kinetic + (log charge - N(1+log alpha))*charge - entropy.
double log_sobolev_gap(const Field& f, double alpha);

// Exact projection onto the zero set of the Nehari functional:
// u -> rho*u with rho = exp(I_omega(u) / (2 charge(u))).
Field nehari_rescale(const Field& f, double omega);

FunctionalReport functional_report(const Field& f, double omega);

double l2_norm(const Field& f);
double l2_distance(const Field& a, const Field& b);

}  // namespace lognls
