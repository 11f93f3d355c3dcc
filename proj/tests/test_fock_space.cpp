#include <doctest.h>

#include <cmath>
#include <complex>

#include "qbatt/fock_space.hpp"

using namespace qbatt;

namespace {

// Deterministic dense Hermitian matrix for propagator checks.
Mat test_hermitian(int n) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = cx(std::sin(7.0 * i + 3.0 * j), std::cos(2.0 * i - 5.0 * j)) / 4.0;
    return Mat(a + a.adjoint());
}

}  // namespace

TEST_CASE("layout indexing and qubit bit convention") {
    HilbertLayout lay(2, 5);
    CHECK(lay.dim() == 20);
    CHECK(lay.qubit_states() == 4);
    CHECK(lay.index(0b10u, 3) == 13);
    CHECK(lay.bits_of(13) == 0b10u);
    CHECK(lay.cavity_of(13) == 3);

    // Bit value 0 marks the excited state; qubit 1 sits in the most
    // significant of the M bits.
    CHECK(lay.excited(0b01u, 1));
    CHECK(!lay.excited(0b01u, 2));
    CHECK(!lay.excited(0b10u, 1));
    CHECK(lay.excited(0b10u, 2));
    CHECK(lay.excitation_count(0b00u) == 2);
    CHECK(lay.excitation_count(0b01u) == 1);
    CHECK(lay.excitation_count(0b11u) == 0);
}

TEST_CASE("layout guards") {
    CHECK_THROWS_AS(HilbertLayout(13, 1), ResourceError);
    CHECK_THROWS_AS(HilbertLayout(3, 1000), ResourceError);
    CHECK_THROWS_AS(HilbertLayout(-1, 2), std::invalid_argument);
    CHECK_THROWS_AS(HilbertLayout(0, 0), std::invalid_argument);
    CHECK_NOTHROW(HilbertLayout(0, 64));
}

TEST_CASE("annihilation operator and ladder algebra") {
    const int d = 6;
    FockOperator a = annihilation(d);
    REQUIRE(a.entries.rows() == d);
    for (int n = 1; n < d; ++n) {
        CHECK(a.entries(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))).epsilon(1e-15));
        CHECK(a.entries(n - 1, n).imag() == 0.0);
    }
    CHECK(a.entries.cwiseAbs().sum() ==
          doctest::Approx((a.entries.diagonal(1).cwiseAbs().sum())));

    Mat num = number_operator(d).entries;
    CHECK((a.entries.adjoint() * a.entries - num).norm() == doctest::Approx(0.0).epsilon(1e-14));

    // [a, a+] is the identity away from the truncation edge.
    Mat comm = a.entries * a.entries.adjoint() - a.entries.adjoint() * a.entries;
    for (int n = 0; n < d - 1; ++n)
        CHECK(comm(n, n).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(comm(d - 1, d - 1).real() == doctest::Approx(-(d - 1.0)).epsilon(1e-15));
}

TEST_CASE("qubit sigma operators") {
    HilbertLayout lay(2, 1);
    Mat z1 = qubit_sigma(SigmaKind::Z, lay, 1).entries;
    Mat z2 = qubit_sigma(SigmaKind::Z, lay, 2).entries;
    RVec z1diag = z1.diagonal().real();
    RVec z2diag = z2.diagonal().real();
    CHECK(z1diag(0) == 1.0);
    CHECK(z1diag(1) == 1.0);
    CHECK(z1diag(2) == -1.0);
    CHECK(z1diag(3) == -1.0);
    CHECK(z2diag(0) == 1.0);
    CHECK(z2diag(1) == -1.0);
    CHECK(z2diag(2) == 1.0);
    CHECK(z2diag(3) == -1.0);

    // sigma+ promotes |g> to |e> on its own slot only.
    Mat p1 = qubit_sigma(SigmaKind::Plus, lay, 1).entries;
    CHECK(p1(lay.index(0b00u, 0), lay.index(0b10u, 0)).real() == 1.0);
    CHECK(p1(lay.index(0b01u, 0), lay.index(0b11u, 0)).real() == 1.0);
    CHECK(p1.cwiseAbs().sum() == doctest::Approx(2.0));

    Mat x1 = qubit_sigma(SigmaKind::X, lay, 1).entries;
    Mat m1 = qubit_sigma(SigmaKind::Minus, lay, 1).entries;
    CHECK((x1 - (p1 + m1)).norm() == doctest::Approx(0.0));
    CHECK((x1 * x1 - Mat::Identity(4, 4)).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(qubit_sigma(SigmaKind::Z, lay, 0), std::invalid_argument);
    CHECK_THROWS_AS(qubit_sigma(SigmaKind::Z, lay, 3), std::invalid_argument);
}

TEST_CASE("tensor product ordering") {
    HilbertLayout qlay(1, 1);
    Mat zq(2, 2);
    zq << 1, 0, 0, -1;
    FockOperator z{qlay, zq, "sz"};
    FockOperator num = number_operator(3);

    FockOperator zn = tensor(z, num);
    CHECK(zn.layout == HilbertLayout(1, 3));
    for (int n = 0; n < 3; ++n) {
        CHECK(zn.entries(zn.layout.index(0u, n), zn.layout.index(0u, n)).real() ==
              doctest::Approx(double(n)));
        CHECK(zn.entries(zn.layout.index(1u, n), zn.layout.index(1u, n)).real() ==
              doctest::Approx(-double(n)));
    }

    // The qubit factor must come first.
    CHECK_THROWS_AS(tensor(num, z), std::invalid_argument);
}

TEST_CASE("partial trace of product and entangled states") {
    HilbertLayout qlay(1, 1);
    Mat rq(2, 2);
    rq << 0.3, 0, 0, 0.7;
    DensityMatrix rho_q(qlay, rq);

    HilbertLayout clay(0, 3);
    Mat rc = Mat::Zero(3, 3);
    rc(0, 0) = 0.5;
    rc(1, 1) = 0.25;
    rc(2, 2) = 0.25;
    DensityMatrix rho_c(clay, rc);

    DensityMatrix joint = tensor(rho_q, rho_c);
    CHECK(joint.layout == HilbertLayout(1, 3));
    CHECK(std::abs(joint.entries.trace() - cx(1.0)) < 1e-12);

    DensityMatrix back_c = partial_trace(joint, KeepSelector{true, {}});
    CHECK((back_c.entries - rc).norm() == doctest::Approx(0.0).epsilon(1e-14));
    DensityMatrix back_q = partial_trace(joint, KeepSelector{false, {1}});
    CHECK((back_q.entries - rq).norm() == doctest::Approx(0.0).epsilon(1e-14));

    // Maximally entangled qubit-cavity pair reduces to I/2 on both sides.
    HilbertLayout lay(1, 2);
    Vec psi = Vec::Zero(4);
    psi(lay.index(0u, 0)) = 1.0 / std::sqrt(2.0);
    psi(lay.index(1u, 1)) = 1.0 / std::sqrt(2.0);
    DensityMatrix bell(lay, psi * psi.adjoint());
    Mat half = 0.5 * Mat::Identity(2, 2);
    CHECK((partial_trace(bell, KeepSelector{true, {}}).entries - half).norm() ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK((partial_trace(bell, KeepSelector{false, {1}}).entries - half).norm() ==
          doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(partial_trace(joint, KeepSelector{false, {}}), std::invalid_argument);
}

TEST_CASE("matrix exponential agrees with spectral propagator") {
    const int n = 6;
    Mat h = test_hermitian(n);
    const double t = 1.7;
    Mat u_pade = matrix_exp(h, cx(0.0, -t));
    Mat u_spec = hermitian_propagator(h, t);
    CHECK((u_pade - u_spec).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u_pade * u_pade.adjoint() - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u_spec * u_spec.adjoint() - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("density matrix invariants are enforced") {
    HilbertLayout lay(1, 1);
    Mat bad(2, 2);
    bad << 0.5, 0.2, 0.3, 0.5;
    CHECK_THROWS_AS(DensityMatrix(lay, bad), std::invalid_argument);

    Mat off_trace(2, 2);
    off_trace << 0.6, 0, 0, 0.6;
    CHECK_THROWS_AS(DensityMatrix(lay, off_trace), std::invalid_argument);

    Mat negative(2, 2);
    negative << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(DensityMatrix(lay, negative), std::invalid_argument);

    Mat ok(2, 2);
    ok << 0.25, cx(0.1, 0.05), cx(0.1, -0.05), 0.75;
    CHECK_NOTHROW(DensityMatrix(lay, ok));
}

TEST_CASE("expectation values") {
    HilbertLayout clay(0, 4);
    Mat rc = Mat::Zero(4, 4);
    rc(0, 0) = 0.25;
    rc(1, 1) = 0.25;
    rc(2, 2) = 0.5;
    DensityMatrix rho(clay, rc);
    cx n_mean = expectation(rho, number_operator(4));
    CHECK(n_mean.real() == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(n_mean.imag() == doctest::Approx(0.0));
}
