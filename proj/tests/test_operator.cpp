#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <memory>

#include "gew/error.hpp"
#include "gew/operator.hpp"
#include "gew/quadrature.hpp"
#include "test_util.hpp"

using namespace gew;

namespace {

constexpr double k0 = 1.45;

FrameParams frame()
{
    FrameParams fp;
    fp.alpha = fp.beta = std::sqrt(2.0 / 3.0);
    return fp;
}

const FrameParams fp = frame();
const ZGrid zg = ZGrid::make(-0.3, 0.05, 12);

struct Fixture {
    DualWindow dw;
    std::shared_ptr<const KernelTable> sp, sc;
    Fixture()
    {
        dw = fit_dual_biorthogonal(zak_dual_window(fp), 2, 3, fp);
        EwaldConfig c;
        c.k0 = k0;
        c.split = optimal_split(k0, zg.delta);
        sp = std::make_shared<const KernelTable>(build_spatial_table(fp, zg, c, 2, 3));
        sc = std::make_shared<const KernelTable>(build_spectral_table(fp, zg, c, 2, 3));
    }
    DiscreteOperator make(const ContrastFn& chi) const { return DiscreteOperator(sp, sc, dw, fp, zg, chi); }
};

const Fixture& fx()
{
    static const Fixture f;
    return f;
}

const ContrastFn zero_chi = [](double, double) { return 0.0; };
const ContrastFn unit_chi = [](double, double) { return 1.0; };
const ContrastFn disc_chi = [](double x, double z) { return x * x + z * z <= 0.3 * 0.3 ? 1.0 : 0.0; };

CoeffTensor random_tensor(unsigned seed)
{
    CoeffTensor J = CoeffTensor::zeros(fp, zg);
    J.data = testutil::random_cvec(J.size(), seed);
    return J;
}

CoeffTensor unit(int m, int n, int k)
{
    CoeffTensor J = CoeffTensor::zeros(fp, zg);
    J(m, n, k) = 1.0;
    return J;
}

}  // namespace

TEST_CASE("coefficient tensor layout and arithmetic")
{
    CoeffTensor a = CoeffTensor::zeros(fp, zg);
    CHECK(a.size() == static_cast<std::size_t>(13 * 7 * 13));
    CHECK(a.index(-6, -3, 0) == 0);
    CHECK(a.index(6, 3, 12) == a.size() - 1);
    CHECK(a.slice(1) - a.slice(0) == a.slice_size());
    a(1, -2, 5) = cplx(2.0, 1.0);
    const CoeffTensor b = cplx(0.0, 1.0) * a;
    CHECK(b(1, -2, 5) == cplx(-1.0, 2.0));
    CHECK((a + b - b).data == a.data);
    CHECK(a.norm() == doctest::Approx(std::sqrt(5.0)));
    CoeffTensor other;
    other.M = 1;
    CHECK_THROWS_AS(a + other, DimensionMismatch);
}

TEST_CASE("table consistency is checked")
{
    FrameParams big = fp;
    big.M = 9;
    CHECK_THROWS_AS(DiscreteOperator(fx().sp, fx().sc, fx().dw, big, zg, zero_chi), DimensionMismatch);
    const ZGrid other = ZGrid::make(-0.3, 0.05, 10);
    CHECK_THROWS_AS(DiscreteOperator(fx().sp, fx().sc, fx().dw, fp, other, zero_chi), DimensionMismatch);
    CHECK_THROWS_AS(DiscreteOperator(fx().sp, fx().sp, fx().dw, fp, zg, zero_chi), DimensionMismatch);
}

TEST_CASE("zero source and zero contrast")
{
    const DiscreteOperator op = fx().make(zero_chi);
    const CoeffTensor zero = CoeffTensor::zeros(fp, zg);
    for (cplx v : green_apply(zero, op).data) CHECK(v == cplx(0.0));
    const CoeffTensor J = random_tensor(1), Jinc = random_tensor(2);
    for (int l = 0; l <= zg.n_k; ++l) CHECK(op.contrast_matrix(l).size() == 0);
    for (cplx v : contrast_multiply(J, op).data) CHECK(v == cplx(0.0));
    const CoeffTensor r = forward(J, Jinc, op);
    CHECK(r.data == (J - Jinc).data);
    const Eigen::MatrixXcd A = assemble_dense(op);
    CHECK((A - Eigen::MatrixXcd::Identity(A.rows(), A.cols())).norm() == 0.0);
}

TEST_CASE("green_apply is linear")
{
    const DiscreteOperator op = fx().make(zero_chi);
    const CoeffTensor a = random_tensor(3), b = random_tensor(4);
    const cplx ca(0.7, -0.2), cb(-1.3, 0.5);
    const CoeffTensor lhs = green_apply(ca * a + cb * b, op);
    const CoeffTensor rhs = ca * green_apply(a, op) + cb * green_apply(b, op);
    CHECK(testutil::rel_l2(lhs.data, rhs.data) <= 1e-13);
}

TEST_CASE("unit source against direct quadrature of the Green integral")
{
    const DiscreteOperator op = fx().make(zero_chi);
    const int kmid = 6;
    const CoeffTensor E = green_apply(unit(0, 0, kmid), op);
    const double D = zg.delta, zk = zg.z(kmid);
    const quad::Options in{1e-10, 1e-14, 20000}, out{1e-9, 1e-13, 20000};
    double num = 0.0, den = 0.0;
    for (double x : {-0.8, -0.3, 0.1, 0.6})
        for (int iz : {0, 4, 6, 9}) {
            const double z = zg.z(iz);
            auto fz = [&](double zp) {
                const double lam = 1.0 - std::abs(zp - zk) / D, dz = z - zp;
                auto fxp = [&](double xp) {
                    const double R = std::hypot(x - xp, dz);
                    return R == 0.0 ? cplx(0.0) : green_exact(R, k0) * window_value(xp, fp);
                };
                std::vector<double> bp{-2.5, x, 2.5};
                return lam * quad::integrate(fxp, bp, in).value;
            };
            std::vector<double> bz{zk - D, zk, zk + D};
            if (z > zk - D && z < zk + D && z != zk) {
                bz.push_back(z);
                std::sort(bz.begin(), bz.end());
            }
            const cplx ref = k0 * k0 * quad::integrate(fz, bz, out).value;
            const cplx got = synthesize_point(E, fp, zg, x, z);
            num += std::norm(got - ref);
            den += std::norm(ref);
        }
    const double rel = std::sqrt(num / den);
    MESSAGE("unit source relative L2 ", rel);
    CHECK(rel <= 1e-3);
}

TEST_CASE("shifting the source node shifts the output")
{
    const DiscreteOperator op = fx().make(zero_chi);
    const CoeffTensor a = green_apply(unit(1, -1, 5), op), b = green_apply(unit(1, -1, 6), op);
    double worst = 0.0, scale = 0.0;
    for (int s = -fp.M; s <= fp.M; ++s)
        for (int t = -fp.N; t <= fp.N; ++t)
            for (int l = 0; l < zg.n_k; ++l) {
                worst = std::max(worst, std::abs(a(s, t, l) - b(s, t, l + 1)));
                scale = std::max(scale, std::abs(a(s, t, l)));
            }
    CHECK(worst <= 1e-14 * scale);
}

TEST_CASE("shifting the source window shifts the output")
{
    // g_{m+1,0}(x) = g_{m,0}(x - alpha X): coefficients move one step in s
    // with the modulation phase exp(-2 pi j alpha beta t)
    const DiscreteOperator op = fx().make(zero_chi);
    const CoeffTensor a = green_apply(unit(0, 0, 6), op), b = green_apply(unit(1, 0, 6), op);
    double num = 0.0, den = 0.0;
    for (int s = -2; s <= 2; ++s)
        for (int t = -fp.N; t <= fp.N; ++t)
            for (int l = 0; l <= zg.n_k; ++l) {
                const cplx expect = std::polar(1.0, -2.0 * pi * fp.alpha * fp.beta * t) * a(s, t, l);
                num += std::norm(b(s + 1, t, l) - expect);
                den += std::norm(expect);
            }
    CHECK(std::sqrt(num / den) <= 1e-3);
}

TEST_CASE("dense assembly agrees with the matrix-free forward map")
{
    const DiscreteOperator op = fx().make(disc_chi);
    const Eigen::MatrixXcd A = assemble_dense(op);
    CHECK(A.rows() == static_cast<Eigen::Index>(op.unknowns()));
    const CoeffTensor zero = CoeffTensor::zeros(fp, zg);
    for (unsigned seed = 10; seed < 15; ++seed) {
        const CoeffTensor J = random_tensor(seed);
        const CoeffTensor r = forward(J, zero, op);
        const Eigen::VectorXcd y = A * Eigen::Map<const Eigen::VectorXcd>(J.data.data(), static_cast<Eigen::Index>(J.size()));
        const cvec yv(y.data(), y.data() + y.size());
        CHECK(testutil::rel_l2(yv, r.data) <= 1e-12);
    }
    const Eigen::MatrixXcd G = assemble_green(op);
    const CoeffTensor J = random_tensor(20);
    const Eigen::VectorXcd g = G * Eigen::Map<const Eigen::VectorXcd>(J.data.data(), static_cast<Eigen::Index>(J.size()));
    CHECK(testutil::rel_l2(cvec(g.data(), g.data() + g.size()), green_apply(J, op).data) <= 1e-12);
    CHECK_THROWS_AS(assemble_dense(op, 100), SizeCap);
}

TEST_CASE("unit contrast reproduces representable fields")
{
    const DiscreteOperator op = fx().make(unit_chi);
    const XGrid& g = op.basis().grid();
    CoeffTensor c = CoeffTensor::zeros(fp, zg);
    for (int k = 0; k <= zg.n_k; ++k) {
        cvec f(static_cast<std::size_t>(g.n));
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            f[static_cast<std::size_t>(i)] = std::exp(-x * x) * std::polar(1.0, 1.2 * x + zg.z(k));
        }
        const cvec a = op.basis().analyze(f);
        std::copy(a.begin(), a.end(), c.slice(k));
    }
    const CoeffTensor back = contrast_multiply(c, op);
    CHECK(testutil::rel_l2(back.data, c.data) <= 1e-3);
}

TEST_CASE("contrast multiplication is confined to the support")
{
    const DiscreteOperator op = fx().make(disc_chi);
    const CoeffTensor out = contrast_multiply(random_tensor(30), op);
    double inside = 0.0, outside = 0.0;
    for (int iz = 0; iz <= zg.n_k; ++iz)
        for (double x = -2.5; x <= 2.5; x += 0.05) {
            const double v = std::abs(synthesize_point(out, fp, zg, x, zg.z(iz)));
            if (std::abs(x) < 0.25) inside = std::max(inside, v);
            if (std::abs(x) > 0.3 + 2.0 * fp.X) outside = std::max(outside, v);
        }
    CHECK(outside <= 1e-2 * inside);
}

TEST_CASE("reciprocity of the Green part")
{
    // bilinear pairing of fields with frame elements: Gram of the x windows
    // (no conjugation) times the triangle mass matrix in z
    const DiscreteOperator op = fx().make(zero_chi);
    const XGrid& g = op.basis().grid();
    const Eigen::MatrixXcd& S = op.basis().synthesis_columns();
    const Eigen::MatrixXcd Gx = S.transpose() * S * g.h;
    auto mass = [&](int k, int l) {
        if (k == l) return (k == 0 || k == zg.n_k ? 1.0 / 3.0 : 2.0 / 3.0) * zg.delta;
        return std::abs(k - l) == 1 ? zg.delta / 6.0 : 0.0;
    };
    auto pair = [&](const CoeffTensor& a, const CoeffTensor& b) {
        cplx s = 0.0;
        for (int k = 0; k <= zg.n_k; ++k)
            for (int l = std::max(0, k - 1); l <= std::min(zg.n_k, k + 1); ++l) {
                const Eigen::Map<const Eigen::VectorXcd> ak(a.slice(k), fp.size()), bl(b.slice(l), fp.size());
                s += mass(k, l) * (ak.transpose() * Gx * bl).value();
            }
        return s;
    };
    const CoeffTensor a = unit(-1, 1, 4), b = unit(2, 0, 8);
    const cplx ab = pair(b, green_apply(a, op)), ba = pair(a, green_apply(b, op));
    MESSAGE("reciprocity mismatch ", std::abs(ab - ba) / std::abs(ab));
    CHECK(std::abs(ab - ba) <= 1e-3 * std::abs(ab));
}
