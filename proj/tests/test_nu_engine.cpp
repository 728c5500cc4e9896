#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hartmann/nu_engine.hpp"

using namespace hartmann;
using namespace hartmann::nu;

namespace {

// Radial reduction of a Coulomb-type equation: sigma = r, tau~ = 0,
// sigma~ = -eps^2 r^2 - bsq r - l(l+1).
NUProblem radial_problem(double eps, double bsq, double ell) {
    return {{0.0, 0.0, 0.0},
            {0.0, 1.0, 0.0},
            {-ell * (ell + 1.0), -bsq, -eps * eps}};
}

// Polar reduction in x = cos(theta): sigma = 1 - x^2, tau~ = -2x,
// sigma~ = (lambda - mp2) - lambda x^2 where mp2 = m'^2.
NUProblem angular_problem(double lambda, double mp2) {
    return {{0.0, -2.0, 0.0},
            {1.0, 0.0, -1.0},
            {lambda - mp2, 0.0, -lambda}};
}

bool poly_close(const hartmann::Poly2& p, double c0, double c1, double tol) {
    return std::abs(p.c0 - c0) <= tol && std::abs(p.c1 - c1) <= tol &&
           p.c2 == 0.0;
}

}  // namespace

TEST_CASE("Poly2 basics") {
    const hartmann::Poly2 p{1.0, -3.0, 2.0};
    CHECK(p.degree() == 2);
    CHECK(p(2.0) == 3.0);
    const hartmann::Poly2 d = p.derivative();
    CHECK(d.c0 == -3.0);
    CHECK(d.c1 == 4.0);
    CHECK(d.c2 == 0.0);
    CHECK(hartmann::Poly2{0.0, 5.0, 0.0}.degree() == 1);
    CHECK(hartmann::Poly2{7.0, 0.0, 0.0}.degree() == 0);
    CHECK(hartmann::discriminant({2.0, 3.0, 1.0}) == 1.0);
}

TEST_CASE("problem validation") {
    // tau~ must stay linear.
    NUProblem bad_tau{{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(bad_tau.validate(), InvalidProblemError);
    // sigma must not vanish identically.
    NUProblem bad_sigma{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(bad_sigma.validate(), InvalidProblemError);
}

TEST_CASE("k candidates: radial fixture") {
    // eps = 1, bsq = -1, l = 1 gives k = -bsq -+ 2 eps (l + 1/2) = {-2, 4}.
    const std::vector<double> ks = k_candidates(radial_problem(1.0, -1.0, 1.0));
    REQUIRE(ks.size() == 2);
    CHECK_THAT(ks[0], Catch::Matchers::WithinAbs(-2.0, 1e-12));
    CHECK_THAT(ks[1], Catch::Matchers::WithinAbs(4.0, 1e-12));
}

TEST_CASE("k candidates: angular fixture") {
    // lambda = 6, m'^2 = 1 gives k = {lambda - m'^2, lambda} = {5, 6}.
    const std::vector<double> ks = k_candidates(angular_problem(6.0, 1.0));
    REQUIRE(ks.size() == 2);
    CHECK_THAT(ks[0], Catch::Matchers::WithinAbs(5.0, 1e-12));
    CHECK_THAT(ks[1], Catch::Matchers::WithinAbs(6.0, 1e-12));
}

TEST_CASE("k candidates: constant-sigma degenerate case") {
    // sigma = 1, sigma~ = -s^2 + a: q = s^2 + (k - a) is a square iff k = a.
    for (double a : {3.0, 0.5, -2.0}) {
        NUProblem p{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {a, 0.0, -1.0}};
        const std::vector<double> ks = k_candidates(p);
        REQUIRE(ks.size() == 1);
        CHECK_THAT(ks[0], Catch::Matchers::WithinAbs(a, 1e-12));
    }
}

TEST_CASE("k candidates: no real k yields an empty list") {
    // sigma = 1, sigma~ = s^2 - 1: q = -s^2 + 1 + k has negative leading
    // coefficient for every k, so no branch exists.
    NUProblem p{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {-1.0, 0.0, 1.0}};
    CHECK(k_candidates(p).empty());
}

TEST_CASE("k candidates: underdetermined problem is rejected") {
    // sigma = s^2 and sigma~ = s^2 make q = (k ... ) s^2 with an identically
    // zero discriminant: every k works, which the engine refuses to guess.
    NUProblem p{{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(k_candidates(p), InvalidProblemError);
}

TEST_CASE("pi branches: radial fixture at k = -2") {
    const NUProblem p = radial_problem(1.0, -1.0, 1.0);
    const auto [plus, minus] = pi_branches(p, -2.0);
    // pi = 1/2 +- (r - 3/2): the pair {r - 1, 2 - r} in some order.
    const bool direct = poly_close(plus, -1.0, 1.0, 1e-12) &&
                        poly_close(minus, 2.0, -1.0, 1e-12);
    const bool swapped = poly_close(plus, 2.0, -1.0, 1e-12) &&
                         poly_close(minus, -1.0, 1.0, 1e-12);
    CHECK((direct || swapped));
}

TEST_CASE("pi branches: angular fixture at k = 5") {
    const NUProblem p = angular_problem(6.0, 1.0);
    const auto [plus, minus] = pi_branches(p, 5.0);
    // pi = +-x.
    const bool direct =
        poly_close(plus, 0.0, 1.0, 1e-12) && poly_close(minus, 0.0, -1.0, 1e-12);
    const bool swapped =
        poly_close(plus, 0.0, -1.0, 1e-12) && poly_close(minus, 0.0, 1.0, 1e-12);
    CHECK((direct || swapped));
}

TEST_CASE("pi branches: constant-sigma fixture") {
    NUProblem p{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {3.0, 0.0, -1.0}};
    const auto [plus, minus] = pi_branches(p, 3.0);
    const bool direct =
        poly_close(plus, 0.0, 1.0, 1e-12) && poly_close(minus, 0.0, -1.0, 1e-12);
    const bool swapped =
        poly_close(plus, 0.0, -1.0, 1e-12) && poly_close(minus, 0.0, 1.0, 1e-12);
    CHECK((direct || swapped));
}

TEST_CASE("pi branches: non-candidate k is rejected") {
    const NUProblem p = radial_problem(1.0, -1.0, 1.0);
    CHECK_THROWS_AS(pi_branches(p, 0.0), InconsistentKError);
}

TEST_CASE("branch structural invariants") {
    for (const NUProblem& p :
         {radial_problem(1.0, -1.0, 1.0), angular_problem(6.0, 1.0),
          radial_problem(0.5, 2.0, 0.0), angular_problem(12.0, 2.0)}) {
        const std::vector<NUBranch> branches = all_branches(p);
        REQUIRE_FALSE(branches.empty());
        const hartmann::Poly2 h = detail::half_gap(p);
        for (const NUBranch& b : branches) {
            // tau = tau~ + 2 pi, coefficient-wise exact.
            CHECK(b.tau.c0 == p.tau_tilde.c0 + 2.0 * b.pi.c0);
            CHECK(b.tau.c1 == p.tau_tilde.c1 + 2.0 * b.pi.c1);
            // lambda = k + pi', exact.
            CHECK(b.lambda == b.k + b.pi.c1);
            // Perfect-square round trip: (pi - h)^2 must reproduce
            // q = h^2 - sigma~ + k sigma within 1e-10 relative.
            const hartmann::Poly2 root{b.pi.c0 - h.c0, b.pi.c1 - h.c1, 0.0};
            const hartmann::Poly2 q = detail::q_of_k(p, b.k);
            const double scale = std::max(
                {std::abs(q.c0), std::abs(q.c1), std::abs(q.c2), 1.0});
            CHECK(std::abs(root.c0 * root.c0 - q.c0) <= 1e-10 * scale);
            CHECK(std::abs(2.0 * root.c0 * root.c1 - q.c1) <= 1e-10 * scale);
            CHECK(std::abs(root.c1 * root.c1 - q.c2) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("physical branch selection on the fixtures") {
    // Both fixtures have two branches with tau' < 0, so the strict selector
    // must refuse with the tie list and the boundary-behavior resolver must
    // pick the branch the closed-form solution is built on.
    const NUProblem radial = radial_problem(1.0, -1.0, 1.0);
    const std::vector<NUBranch> radial_branches = all_branches(radial);
    CHECK_THROWS_AS(physical_branch(radial, radial_branches), AmbiguousBranchError);
    try {
        physical_branch(radial, radial_branches);
    } catch (const AmbiguousBranchError& e) {
        CHECK(e.branches.size() >= 2);
    }
    const NUBranch radial_pick = resolve_branch(radial, radial_branches);
    // tau = 1 - 2(eps r - l - 1/2) = 4 - 2r.
    CHECK_THAT(radial_pick.tau.c0, Catch::Matchers::WithinAbs(4.0, 1e-12));
    CHECK_THAT(radial_pick.tau.c1, Catch::Matchers::WithinAbs(-2.0, 1e-12));
    CHECK(radial_pick.tau_prime() < 0.0);

    const NUProblem angular = angular_problem(6.0, 1.0);
    const NUBranch angular_pick = resolve_branch(angular, all_branches(angular));
    // tau = -2x - 2 m' x = -4x.
    CHECK_THAT(angular_pick.tau.c0, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(angular_pick.tau.c1, Catch::Matchers::WithinAbs(-4.0, 1e-12));
}

TEST_CASE("physical branch: single negative-slope candidate returned unchanged") {
    const NUProblem p = radial_problem(1.0, -1.0, 1.0);
    const NUBranch pick = resolve_branch(p, all_branches(p));
    const NUBranch same = physical_branch(p, {pick});
    CHECK(same.k == pick.k);
    CHECK(same.tau.c1 == pick.tau.c1);
}

TEST_CASE("physical branch: no candidate with negative slope") {
    const NUProblem p = radial_problem(1.0, -1.0, 1.0);
    std::vector<NUBranch> branches = all_branches(p);
    std::vector<NUBranch> positive;
    for (const NUBranch& b : branches)
        if (b.tau_prime() > 0.0) positive.push_back(b);
    REQUIRE_FALSE(positive.empty());
    CHECK_THROWS_AS(physical_branch(p, positive), NoPhysicalBranchError);
}

TEST_CASE("lambda_n values") {
    const NUProblem radial = radial_problem(1.0, -1.0, 1.0);
    const NUBranch radial_pick = resolve_branch(radial, all_branches(radial));
    CHECK(lambda_n(0, radial_pick, radial) == 0.0);
    // n = 1: -tau' = 2 eps = 2 (sigma'' = 0).
    CHECK_THAT(lambda_n(1, radial_pick, radial),
               Catch::Matchers::WithinAbs(2.0, 1e-12));

    const NUProblem angular = angular_problem(6.0, 1.0);
    const NUBranch angular_pick = resolve_branch(angular, all_branches(angular));
    CHECK(lambda_n(0, angular_pick, angular) == 0.0);
    // n = 2 with m' = 1: 2(2 + 2 m') + 2 = 4 m' + 6 = 10.
    CHECK_THAT(lambda_n(2, angular_pick, angular),
               Catch::Matchers::WithinAbs(10.0, 1e-12));
}

TEST_CASE("weight and phi factorizations") {
    // Radial physical branch: rho = r^{2l+1} e^{-2 eps r}, phi = r^{l+1} e^{-eps r}.
    const NUProblem radial = radial_problem(1.0, -1.0, 1.0);
    const NUBranch radial_pick = resolve_branch(radial, all_branches(radial));
    const WeightAndPhi radial_parts = weight_and_phi(radial, radial_pick);
    REQUIRE(radial_parts.rho.powers.size() == 1);
    CHECK_THAT(radial_parts.rho.powers[0].root, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(radial_parts.rho.powers[0].exponent,
               Catch::Matchers::WithinAbs(3.0, 1e-12));
    CHECK_THAT(radial_parts.rho.exp_c1, Catch::Matchers::WithinAbs(-2.0, 1e-12));
    CHECK(radial_parts.rho.exp_c2 == 0.0);
    REQUIRE(radial_parts.phi.powers.size() == 1);
    CHECK_THAT(radial_parts.phi.powers[0].exponent,
               Catch::Matchers::WithinAbs(2.0, 1e-12));
    CHECK_THAT(radial_parts.phi.exp_c1, Catch::Matchers::WithinAbs(-1.0, 1e-12));

    // Angular physical branch: rho = (1-x^2)^{m'}, phi = (1-x^2)^{m'/2}.
    const NUProblem angular = angular_problem(6.0, 1.0);
    const NUBranch angular_pick = resolve_branch(angular, all_branches(angular));
    const WeightAndPhi angular_parts = weight_and_phi(angular, angular_pick);
    REQUIRE(angular_parts.rho.powers.size() == 2);
    CHECK_THAT(angular_parts.rho.powers[0].root,
               Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK_THAT(angular_parts.rho.powers[1].root,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(angular_parts.rho.powers[0].exponent,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(angular_parts.rho.powers[1].exponent,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(angular_parts.rho.exp_c1 == 0.0);
    REQUIRE(angular_parts.phi.powers.size() == 2);
    CHECK_THAT(angular_parts.phi.powers[0].exponent,
               Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(angular_parts.phi.powers[1].exponent,
               Catch::Matchers::WithinAbs(0.5, 1e-12));

    // Constant sigma with pi = -s integrates to phi = exp(-s^2/2).
    NUProblem hermite{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {3.0, 0.0, -1.0}};
    NUBranch hermite_pick = resolve_branch(hermite, all_branches(hermite));
    REQUIRE(hermite_pick.pi.c1 < 0.0);
    const WeightAndPhi hermite_parts = weight_and_phi(hermite, hermite_pick);
    CHECK(hermite_parts.phi.powers.empty());
    CHECK_THAT(hermite_parts.phi.exp_c2, Catch::Matchers::WithinAbs(-0.5, 1e-12));
    CHECK_THAT(hermite_parts.rho.exp_c2, Catch::Matchers::WithinAbs(-1.0, 1e-12));

    // Complex sigma roots are refused.
    NUProblem complex_sigma{{0.0, 0.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
    const std::vector<NUBranch> cs = all_branches(complex_sigma);
    if (!cs.empty())
        CHECK_THROWS_AS(weight_and_phi(complex_sigma, cs.front()),
                        UnsupportedFormError);
}

TEST_CASE("factor products evaluate their own factorization") {
    const NUProblem radial = radial_problem(1.0, -1.0, 1.0);
    const NUBranch pick = resolve_branch(radial, all_branches(radial));
    const WeightAndPhi parts = weight_and_phi(radial, pick);
    for (double r : {0.5, 1.0, 2.5}) {
        CHECK_THAT(parts.rho(r),
                   Catch::Matchers::WithinRel(std::pow(r, 3.0) * std::exp(-2.0 * r),
                                              1e-12));
        CHECK_THAT(parts.phi(r),
                   Catch::Matchers::WithinRel(r * r * std::exp(-r), 1e-12));
    }
}

TEST_CASE("random parameter draws reproduce the closed-form k values") {
    std::mt19937 rng(123456789);
    std::uniform_real_distribution<double> eps_draw(0.1, 3.0);
    std::uniform_real_distribution<double> bsq_draw(-5.0, 5.0);
    std::uniform_real_distribution<double> ell_draw(0.0, 4.0);
    std::uniform_real_distribution<double> lambda_draw(0.5, 30.0);
    std::uniform_real_distribution<double> mp2_draw(0.1, 9.0);

    for (int trial = 0; trial < 50; ++trial) {
        const double eps = eps_draw(rng);
        const double bsq = bsq_draw(rng);
        const double ell = ell_draw(rng);
        const std::vector<double> radial_ks =
            k_candidates(radial_problem(eps, bsq, ell));
        const double lo = -bsq - 2.0 * eps * (ell + 0.5);
        const double hi = -bsq + 2.0 * eps * (ell + 0.5);
        REQUIRE(radial_ks.size() == 2);
        CHECK_THAT(radial_ks[0],
                   Catch::Matchers::WithinAbs(lo, 1e-12 * std::max(1.0, std::abs(lo))));
        CHECK_THAT(radial_ks[1],
                   Catch::Matchers::WithinAbs(hi, 1e-12 * std::max(1.0, std::abs(hi))));

        const double lambda = lambda_draw(rng);
        const double mp2 = mp2_draw(rng);
        const std::vector<double> angular_ks =
            k_candidates(angular_problem(lambda, mp2));
        REQUIRE(angular_ks.size() == 2);
        CHECK_THAT(angular_ks[0],
                   Catch::Matchers::WithinAbs(lambda - mp2,
                                              1e-12 * std::max(1.0, lambda)));
        CHECK_THAT(angular_ks[1],
                   Catch::Matchers::WithinAbs(lambda, 1e-12 * std::max(1.0, lambda)));
    }
}

TEST_CASE("solve_spectrum recovers the radial closed form") {
    // Family in t = eps with A = 1 (so the linear coefficient is 2):
    // expected eps* = 1/(n + l + 1) and E = -eps*^2/2.
    for (double ell : {0.0, 0.5, 1.0, 2.41421356}) {
        NUFamily family;
        family.at = [ell](double eps) {
            return NUProblem{{0.0, 0.0, 0.0},
                             {0.0, 1.0, 0.0},
                             {-ell * (ell + 1.0), 2.0, -eps * eps}};
        };
        for (int n = 0; n <= 4; ++n) {
            const double eps_star = solve_spectrum(family, n, 1e-3, 2.5);
            const double expected = 1.0 / (n + ell + 1.0);
            const double energy = -0.5 * eps_star * eps_star;
            const double exact = -0.5 * expected * expected;
            CHECK(std::abs(energy - exact) <= 1e-10);
        }
    }
}

TEST_CASE("solve_spectrum recovers the polar closed form") {
    // Family in t = lambda: expected lambda* = (n + m')(n + m' + 1).
    for (double mp : {0.0, 1.0, std::sqrt(2.0), std::sqrt(5.0)}) {
        NUFamily family;
        family.at = [mp](double lambda) {
            return NUProblem{{0.0, -2.0, 0.0},
                             {1.0, 0.0, -1.0},
                             {lambda - mp * mp, 0.0, -lambda}};
        };
        for (int n = 0; n <= 4; ++n) {
            const double lambda_star = solve_spectrum(family, n, -1.0, 60.0);
            const double expected = (n + mp) * (n + mp + 1.0);
            CHECK(std::abs(lambda_star - expected) <= 1e-10);
        }
    }
}

TEST_CASE("solve_spectrum single-level examples") {
    // A = 1, l = 0, n = 0: eps* = 1 (E = -1/2); l = 1, n = 1: eps* = 1/3.
    NUFamily l0;
    l0.at = [](double eps) {
        return NUProblem{{0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 2.0, -eps * eps}};
    };
    CHECK_THAT(solve_spectrum(l0, 0, 1e-3, 2.5),
               Catch::Matchers::WithinAbs(1.0, 1e-10));
    NUFamily l1;
    l1.at = [](double eps) {
        return NUProblem{{0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {-2.0, 2.0, -eps * eps}};
    };
    CHECK_THAT(solve_spectrum(l1, 1, 1e-3, 2.5),
               Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-10));

    // Angular m' = 1, n = 0: lambda* = 2.
    NUFamily ang;
    ang.at = [](double lambda) {
        return NUProblem{{0.0, -2.0, 0.0}, {1.0, 0.0, -1.0}, {lambda - 1.0, 0.0, -lambda}};
    };
    CHECK_THAT(solve_spectrum(ang, 0, -1.0, 60.0),
               Catch::Matchers::WithinAbs(2.0, 1e-10));
}

TEST_CASE("solve_spectrum is deterministic") {
    NUFamily family;
    family.at = [](double eps) {
        return NUProblem{{0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {-2.0, 2.0, -eps * eps}};
    };
    const double first = solve_spectrum(family, 2, 1e-3, 2.5);
    const double second = solve_spectrum(family, 2, 1e-3, 2.5);
    CHECK(first == second);
}

TEST_CASE("solve_spectrum rejects brackets without a sign change") {
    NUFamily family;
    family.at = [](double eps) {
        return NUProblem{{0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 2.0, -eps * eps}};
    };
    CHECK_THROWS_AS(solve_spectrum(family, 0, 1.5, 2.5), BracketError);
}
