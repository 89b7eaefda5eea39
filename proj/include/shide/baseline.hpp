#pragma once

#include <span>
#include <vector>

namespace shide {

enum class KdeMode { Additive, Multiplicative };
enum class SignDomain { RealLine, Positive, Negative };

//! Classical Gaussian-kernel estimate: additive (the usual KDE) or the
//! multiplicative-convolution variant for strictly one-signed data.
struct KdeEstimate
{
  std::vector<double> data;
  double h = 0.0;
  KdeMode mode = KdeMode::Additive;
  SignDomain sign_domain = SignDomain::RealLine;

  KdeEstimate(std::span<const double> observations, double bandwidth,
              KdeMode kde_mode);
};

//! (1/nh) sum phi((x - x_i)/h).
double kde_evaluate(const KdeEstimate& est, double x);

//! (1/nh) sum (1/|x_i|) phi(x/(h x_i)); zero off the data's half-line.
double mkde_evaluate(const KdeEstimate& est, double x);

//! 0.9 min(sd, IQR/1.34) n^(-1/5); falls back to sd alone when IQR = 0.
double silverman_bw(std::span<const double> data);

//! Sheather-Jones solve-the-equation plug-in bandwidth: root of
//! h = (R(phi) / (n Psi4(gamma(h))))^(1/5) by bracketed bisection on
//! [1e-3 s, 10 s], with two-stage normal-scale pilots for the Psi4/Psi6
//! functionals. Falls back to silverman_bw (flag set) when the bracket
//! holds no sign change.
double sj_bw(std::span<const double> data, bool* fell_back = nullptr);

} // namespace shide
