#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "olab/verify.hpp"
#include "olab/young.hpp"

using namespace olab;

TEST_CASE("canonical family evaluation") {
  const YoungFunction id = make_canonical(1.0, 0.0);
  CHECK(id(7.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(id(0.0) == 0.0);

  const YoungFunction sq = make_canonical(2.0, 0.0);
  CHECK(sq(3.0) == doctest::Approx(9.0).epsilon(1e-14));

  const YoungFunction llog = make_canonical(1.0, 1.0);
  const double e = std::exp(1.0);
  CHECK(llog(e) == doctest::Approx(2.0 * e).epsilon(1e-12));
  CHECK(llog(1.0) == doctest::Approx(1.0).epsilon(1e-14));  // Phi(1) = 1

  CHECK_THROWS_AS(make_canonical(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_canonical(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("saturation is detectable, never silent") {
  const YoungFunction f = make_canonical(1.0, 40.0);
  // (1+log z)^40 at z = 1e280 overflows the cap
  const double v = f(1e280);
  CHECK(is_saturated(v));
  CHECK(v == kEvalCap);
  CHECK_FALSE(is_saturated(f(2.0)));
}

TEST_CASE("inverse: closed forms") {
  const YoungFunction sq = make_canonical(2.0, 0.0);
  CHECK(sq.inverse(9.0) == doctest::Approx(3.0).epsilon(1e-10));

  const YoungFunction id = make_canonical(1.0, 0.0);
  CHECK(id.inverse(0.0) == 0.0);
}

TEST_CASE("inverse vs Newton oracle on t(1+log t) = 2") {
  const YoungFunction f = make_canonical(1.0, 1.0);
  // Independent Newton iteration on the smooth branch t >= 1.
  double t = 1.5;
  for (int i = 0; i < 60; ++i) {
    const double val = t * (1.0 + std::log(t)) - 2.0;
    const double deriv = 2.0 + std::log(t);
    t -= val / deriv;
  }
  CHECK(f.inverse(2.0) == doctest::Approx(t).epsilon(1e-10));
}

TEST_CASE("inverse round trip on a log lattice") {
  const YoungFunction phi = make_canonical(1.5, 2.0);
  for (double z : log_spaced(1e-4, 1e4, 33)) {
    const double y = phi(z);
    CHECK(phi.inverse(y) == doctest::Approx(z).epsilon(1e-10));
  }
}

TEST_CASE("derive: eta_eps with delta=0 is the identity") {
  const YoungFunction eta = make_eta_eps(0.0, 0.3);
  for (double z : {0.0, 0.5, 1.0, 7.0, 1e5})
    CHECK(eta(z) == doctest::Approx(z).epsilon(1e-14));
}

TEST_CASE("derive: psi_eps equals the composed evaluators") {
  const YoungFunction phi = make_canonical(1.0, 1.0);
  const YoungFunction eta = make_eta_eps(1.0, 1.0);
  const YoungFunction psi = make_psi_eps(phi, 1.0, 1.0);
  for (double z : log_spaced(1e-3, 1e3, 41))
    CHECK(psi(z) == doctest::Approx(eta(phi(z))).epsilon(1e-13));
}

TEST_CASE("derive: xi with q=2, nu=0 is the square") {
  const YoungFunction xi = make_xi(2.0, 0.0);
  CHECK(xi(3.0) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("derive: eta_tilde exact formula and parameter guard") {
  CHECK_THROWS_AS(make_eta_tilde_eps(0.0, 0.5), std::invalid_argument);
  const YoungFunction et = make_eta_tilde_eps(1.0, 0.5);
  CHECK(et(1.0) == 0.0);
  CHECK(et(0.3) == 0.0);
  const double e = std::exp(1.0);
  CHECK(et(2.0) ==
        doctest::Approx(std::exp(std::pow(2.0, 0.5)) - e).epsilon(1e-13));
  // vanishes on [0,1], continuous at 1+
  CHECK(et(1.0 + 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("derive dispatcher covers all tags") {
  DeriveParams p;
  p.delta = 1.0;
  p.eps = 0.5;
  p.r = 1.0;
  p.q = 2.0;
  p.nu = 2.0;
  p.gamma = 0.5;
  p.p = 1.5;
  p.n = 1;
  CHECK(derive(DerivedTag::eta_eps, p)(1.0) == doctest::Approx(1.0));
  CHECK(derive(DerivedTag::psi_eps, p)(1.0) == doctest::Approx(1.0));
  CHECK(derive(DerivedTag::eta_tilde_eps, p)(0.5) == 0.0);
  CHECK(derive(DerivedTag::xi, p)(1.0) == doctest::Approx(1.0));
  CHECK(derive(DerivedTag::varphi_eps, p)(1.0) == doctest::Approx(1.0));
  CHECK(derive(DerivedTag::phi_gamma_eps, p)(1.0) == doctest::Approx(1.0));
  CHECK(derive(DerivedTag::psi_eps_fractional, p)(1.0) == doctest::Approx(1.0));
  p.xi_low_exp = 3.0;
  p.sigma = 2.0;
  CHECK(derive(DerivedTag::xi, p)(0.5) == doctest::Approx(0.125));
}

TEST_CASE("eta_eps dominates the identity, hence psi >= phi") {
  const YoungFunction phi = make_canonical(1.0, 2.0);
  const YoungFunction eta = make_eta_eps(2.0, 0.4);
  const YoungFunction psi = make_psi_eps(phi, 2.0, 0.4);
  for (double z : log_spaced(1e-5, 1e5, 61)) {
    CHECK(eta(z) >= z * (1.0 - 1e-12));
    if (!is_saturated(psi(z))) CHECK(psi(z) >= phi(z) * (1.0 - 1e-12));
  }
}

TEST_CASE("certify_family: canonical members pass with C0 = 2^delta, t* = e") {
  for (double r : {1.0, 2.0}) {
    for (double delta : {0.0, 1.0, 2.5}) {
      const YoungFunction phi = make_canonical(r, delta);
      const FamilyCertificate cert = certify_family(phi, r, delta, 120);
      CHECK(cert.submultiplicative);
      CHECK(cert.lower_type_r);
      CHECK(cert.growth);
      CHECK(cert.c0 == doctest::Approx(std::pow(2.0, delta)));
      CHECK(cert.tstar == doctest::Approx(std::exp(1.0)));
    }
  }
}

TEST_CASE("certify_family: z^2 fails lower type 3 with a witness") {
  const YoungFunction sq = make_canonical(2.0, 0.0);
  const FamilyCertificate cert = certify_family(sq, 3.0, 0.0, 120);
  CHECK_FALSE(cert.lower_type_r);
  CHECK(std::isfinite(cert.witness_s));
  CHECK(cert.witness_s < 1.0);  // the s^3 bound fails for small s
}

TEST_CASE("certify_family: the identity is submultiplicative") {
  const YoungFunction id = make_canonical(1.0, 0.0);
  const FamilyCertificate cert = certify_family(id, 1.0, 0.0, 80);
  CHECK(cert.submultiplicative);
}

TEST_CASE("phi_gamma_eps: statement and proof variants coincide") {
  // The statement's extra log power plus Phi's own delta equals the proof
  // form's nu(1+1/eps); both constructors must agree pointwise.
  const double r = 1.0, delta = 1.0, eps = 0.25, gamma = 0.5;
  const int n = 1;
  const double q = 1.0 / (1.0 / r - gamma / n);
  const YoungFunction a =
      make_phi_gamma_eps(r, delta, eps, q, gamma, n, PhiGammaVariant::statement);
  const YoungFunction b =
      make_phi_gamma_eps(r, delta, eps, q, gamma, n, PhiGammaVariant::proof);
  for (double z : log_spaced(1e-4, 1e5, 81)) {
    if (is_saturated(a(z)) || is_saturated(b(z))) continue;
    CHECK(a(z) == doctest::Approx(b(z)).epsilon(1e-12));
  }
}

TEST_CASE("psi_eps_fractional: Phi_gamma_eps(z^{1-q/r}) z^q equals it") {
  const double r = 1.0, delta = 1.0, eps = 0.25, gamma = 0.5;
  const int n = 1;
  const double q = 1.0 / (1.0 / r - gamma / n);
  const YoungFunction pg =
      make_phi_gamma_eps(r, delta, eps, q, gamma, n, PhiGammaVariant::proof);
  const YoungFunction psi = make_psi_eps_fractional(r, q, delta, eps);
  for (double z : log_spaced(1e-4, 1e4, 81)) {
    const double lhs = pg(std::pow(z, 1.0 - q / r)) * std::pow(z, q);
    const double rhs = psi(z);
    if (is_saturated(lhs) || is_saturated(rhs)) continue;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
  // the inner log+ activates only below 1
  CHECK(psi(2.0) == doctest::Approx(std::pow(2.0, r)).epsilon(1e-13));
  CHECK(psi(0.5) > std::pow(0.5, r));
}

TEST_CASE("canonical submultiplicativity on sampled pairs") {
  const YoungFunction phi = make_canonical(1.0, 1.0);
  for (double s : log_spaced(1e-3, 1e3, 25))
    for (double t : log_spaced(1e-3, 1e3, 25)) {
      const double l = phi(s * t), r = phi(s) * phi(t);
      if (l > 1e-280 && r > 1e-280) CHECK(l <= r * (1.0 + 1e-9));
    }
}
