#include <cmath>
#include <string>

#include "gew/error.hpp"
#include "gew/operator.hpp"
#include "gew/simd/kernels.hpp"

namespace gew {

CoeffTensor CoeffTensor::zeros(const FrameParams& fp, const ZGrid& zg)
{
    CoeffTensor c;
    c.M = fp.M;
    c.N = fp.N;
    c.n_k = zg.n_k;
    c.data.assign(static_cast<std::size_t>(fp.size()) * zg.num_k(), 0.0);
    return c;
}

double CoeffTensor::norm() const
{
    double s = 0.0;
    for (const cplx& z : data) s += std::norm(z);
    return std::sqrt(s);
}

namespace {

void require_same(const CoeffTensor& a, const CoeffTensor& b)
{
    if (!a.same_shape(b) || a.size() != b.size()) throw DimensionMismatch("coefficient tensors differ in shape");
}

void require_fits(const CoeffTensor& c, const DiscreteOperator& op)
{
    if (c.M != op.fp().M || c.N != op.fp().N || c.n_k != op.zg().n_k || c.size() != op.unknowns())
        throw DimensionMismatch("coefficient tensor does not match the operator");
}

void check_table(const KernelTable& t, TableKind kind, const DualWindow& dw, const FrameParams& fp, const ZGrid& zg)
{
    const std::string name = to_string(kind);
    if (t.kind != kind) throw DimensionMismatch(name + " table has the wrong kind");
    if (t.fp.X != fp.X || t.fp.alpha != fp.alpha || t.fp.beta != fp.beta)
        throw DimensionMismatch(name + " table was built for other frame parameters");
    if (t.zg.delta != zg.delta || t.zg.n_k != zg.n_k)
        throw DimensionMismatch(name + " table was built for another z-grid");
    if (t.Q < 2 * fp.M + dw.Nu || t.P < 2 * fp.N + dw.Nv)
        throw DimensionMismatch(name + " table does not cover the index range of the frame and dual window");
}

}  // namespace

CoeffTensor operator+(const CoeffTensor& a, const CoeffTensor& b)
{
    require_same(a, b);
    CoeffTensor r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.data[i] += b.data[i];
    return r;
}

CoeffTensor operator-(const CoeffTensor& a, const CoeffTensor& b)
{
    require_same(a, b);
    CoeffTensor r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.data[i] -= b.data[i];
    return r;
}

CoeffTensor operator*(cplx s, const CoeffTensor& a)
{
    CoeffTensor r = a;
    for (cplx& z : r.data) z *= s;
    return r;
}

DiscreteOperator::DiscreteOperator(std::shared_ptr<const KernelTable> spatial,
                                   std::shared_ptr<const KernelTable> spectral, const DualWindow& dual,
                                   const FrameParams& fp, const ZGrid& zg, const ContrastFn& chi)
    : spatial_(std::move(spatial)), spectral_(std::move(spectral)), dual_(dual), fp_(fp), zg_(zg), k0_(0.0)
{
    if (!spatial_ || !spectral_) throw DimensionMismatch("operator needs both kernel tables");
    fp_.validate();
    zg_.validate();
    check_table(*spatial_, TableKind::spatial, dual_, fp_, zg_);
    check_table(*spectral_, TableKind::spectral, dual_, fp_, zg_);
    if (spatial_->cfg.k0 != spectral_->cfg.k0 || spatial_->cfg.split != spectral_->cfg.split)
        throw DimensionMismatch("spatial and spectral tables disagree on k0 or the split");
    k0_ = spatial_->cfg.k0;
    basis_ = std::make_unique<GaborBasis>(fp_, XGrid::standard(fp_), dual_);
    build_weights();
    build_contrast(chi);
}

cplx DiscreteOperator::phase(int s, int n, int t) const
{
    const int nn = 2 * fp_.N + 1;
    return phase_[(static_cast<std::size_t>(s + fp_.M) * nn + static_cast<std::size_t>(n + fp_.N)) * nn +
                  static_cast<std::size_t>(t + fp_.N)];
}

// With mu = m - s the pair phase splits into e^{2 pi j ab s(n-t)}, kept in
// phase_, and a part depending on (mu, n, t, u, v) folded into the weights.
void DiscreteOperator::build_weights()
{
    const int M = fp_.M, N = fp_.N, nk = zg_.n_k, nd = 2 * nk + 1;
    const double ab = fp_.alpha * fp_.beta, X = fp_.X;
    const double c_spatial = X * X / std::sqrt(pi);
    const double c_spectral = X * std::sqrt(2.0 / pi);
    const double k2 = k0_ * k0_;
    const std::size_t total = static_cast<std::size_t>(4 * M + 1) * (2 * N + 1) * (2 * N + 1) * nd;
    rise_.assign(total, 0.0);
    fall_.assign(total, 0.0);
    std::vector<cplx> acc(static_cast<std::size_t>(nd));
    for (int mu = -2 * M; mu <= 2 * M; ++mu)
        for (int n = -N; n <= N; ++n)
            for (int t = -N; t <= N; ++t) {
                std::fill(acc.begin(), acc.end(), cplx(0.0));
                for (int u = -dual_.Nu; u <= dual_.Nu; ++u)
                    for (int v = -dual_.Nv; v <= dual_.Nv; ++v) {
                        const double dv = fp_.beta * (n - t - v);
                        const double ph = 2.0 * pi * ab * (mu * n - u * (t + v));
                        const cplx w = k2 * std::conj(dual_.coeff(u, v)) *
                                       std::polar(std::exp(-0.5 * pi * dv * dv), ph);
                        const int p = n + t + v;
                        const cplx* sp = spatial_->row(mu - u, p);
                        const cplx* sc = spectral_->row(u - mu, p);
                        const cplx ws = w * c_spatial, wc = w * c_spectral;
                        for (int j = 0; j < nd; ++j) acc[static_cast<std::size_t>(j)] += ws * sp[j] + wc * sc[j];
                    }
                cplx* r = rise_.data() + weight_index(mu, n, t);
                cplx* f = fall_.data() + weight_index(mu, n, t);
                for (int j = 0; j < nd; ++j) {
                    r[j] = acc[static_cast<std::size_t>(j)];
                    f[j] = acc[static_cast<std::size_t>(nd - 1 - j)];
                }
            }
    const int nn = 2 * N + 1;
    phase_.resize(static_cast<std::size_t>(2 * M + 1) * nn * nn);
    for (int s = -M; s <= M; ++s)
        for (int n = -N; n <= N; ++n)
            for (int t = -N; t <= N; ++t)
                phase_[(static_cast<std::size_t>(s + M) * nn + static_cast<std::size_t>(n + N)) * nn +
                       static_cast<std::size_t>(t + N)] = std::polar(1.0, 2.0 * pi * ab * s * (n - t));
}

void DiscreteOperator::build_contrast(const ContrastFn& chi)
{
    const XGrid& g = basis_->grid();
    const Eigen::MatrixXcd& A = basis_->analysis_columns();
    const Eigen::MatrixXcd& S = basis_->synthesis_columns();
    chi_.assign(static_cast<std::size_t>(zg_.num_k()), std::vector<double>(static_cast<std::size_t>(g.n), 0.0));
    contrast_.assign(static_cast<std::size_t>(zg_.num_k()), Eigen::MatrixXcd());
    for (int l = 0; l <= zg_.n_k; ++l) {
        auto& row = chi_[static_cast<std::size_t>(l)];
        bool any = false;
        for (int i = 0; i < g.n; ++i) {
            row[static_cast<std::size_t>(i)] = chi ? chi(g.x(i), zg_.z(l)) : 0.0;
            any = any || row[static_cast<std::size_t>(i)] != 0.0;
        }
        if (!any) continue;
        const Eigen::Map<const Eigen::VectorXd> w(row.data(), g.n);
        contrast_[static_cast<std::size_t>(l)] = A.transpose() * (w.asDiagonal() * S);
    }
}

CoeffTensor green_apply(const CoeffTensor& J, const DiscreteOperator& op)
{
    require_fits(J, op);
    const FrameParams& fp = op.fp();
    const int M = fp.M, N = fp.N, nk = op.zg().n_k, S = fp.size(), nk1 = nk + 1;
    // k-contiguous copy of J, so each (m,n) contributes two dot products
    std::vector<cplx> Jt(static_cast<std::size_t>(S) * nk1);
    for (int k = 0; k <= nk; ++k)
        for (int i = 0; i < S; ++i) Jt[static_cast<std::size_t>(i) * nk1 + k] = J.slice(k)[i];
    std::vector<char> live(static_cast<std::size_t>(S), 0);
    for (int i = 0; i < S; ++i)
        for (int k = 0; k <= nk && !live[static_cast<std::size_t>(i)]; ++k)
            live[static_cast<std::size_t>(i)] = Jt[static_cast<std::size_t>(i) * nk1 + k] != 0.0;

    CoeffTensor out = CoeffTensor::zeros(fp, op.zg());
    for (int s = -M; s <= M; ++s)
        for (int t = -N; t <= N; ++t)
            for (int l = 0; l <= nk; ++l) {
                cplx total = 0.0;
                for (int m = -M; m <= M; ++m)
                    for (int n = -N; n <= N; ++n) {
                        const int i = fp.index(m, n);
                        if (!live[static_cast<std::size_t>(i)]) continue;
                        const cplx* j = Jt.data() + static_cast<std::size_t>(i) * nk1;
                        // entry d + nk of a weight row; d = k - l
                        const cplx* r = op.rise_row(m - s, n, t) + (nk - l);
                        const cplx* f = op.fall_row(m - s, n, t) + (nk - l);
                        const cplx sum = simd::dotu(j, r, static_cast<std::size_t>(nk)) +
                                         simd::dotu(j + 1, f + 1, static_cast<std::size_t>(nk));
                        total += op.phase(s, n, t) * sum;
                    }
                out(s, t, l) = total;
            }
    return out;
}

CoeffTensor contrast_multiply(const CoeffTensor& c, const DiscreteOperator& op)
{
    require_fits(c, op);
    CoeffTensor out = CoeffTensor::zeros(op.fp(), op.zg());
    const int S = op.fp().size();
    for (int l = 0; l <= op.zg().n_k; ++l) {
        const Eigen::MatrixXcd& P = op.contrast_matrix(l);
        if (P.size() == 0) continue;
        Eigen::Map<Eigen::VectorXcd>(out.slice(l), S).noalias() =
            P * Eigen::Map<const Eigen::VectorXcd>(c.slice(l), S);
    }
    return out;
}

CoeffTensor forward(const CoeffTensor& J, const CoeffTensor& J_inc, const DiscreteOperator& op)
{
    require_same(J, J_inc);
    return J - J_inc - contrast_multiply(green_apply(J, op), op);
}

Eigen::MatrixXcd assemble_green(const DiscreteOperator& op, std::size_t max_unknowns)
{
    const std::size_t n = op.unknowns();
    if (n > max_unknowns)
        throw SizeCap(std::to_string(n) + " unknowns exceed the dense cap of " + std::to_string(max_unknowns) +
                      "; use the iterative solver");
    const FrameParams& fp = op.fp();
    const int M = fp.M, N = fp.N, nk = op.zg().n_k, S = fp.size();
    Eigen::MatrixXcd G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (int k = 0; k <= nk; ++k)
        for (int m = -M; m <= M; ++m)
            for (int nn = -N; nn <= N; ++nn) {
                const Eigen::Index col = static_cast<Eigen::Index>(k) * S + fp.index(m, nn);
                for (int l = 0; l <= nk; ++l)
                    for (int s = -M; s <= M; ++s)
                        for (int t = -N; t <= N; ++t) {
                            const int d = k - l + nk;
                            cplx w = 0.0;
                            if (k < nk) w += op.rise_row(m - s, nn, t)[d];
                            if (k > 0) w += op.fall_row(m - s, nn, t)[d];
                            G(static_cast<Eigen::Index>(l) * S + fp.index(s, t), col) = op.phase(s, nn, t) * w;
                        }
            }
    return G;
}

Eigen::MatrixXcd assemble_dense(const DiscreteOperator& op, std::size_t max_unknowns)
{
    Eigen::MatrixXcd A = assemble_green(op, max_unknowns);
    const int S = op.fp().size();
    for (int l = 0; l <= op.zg().n_k; ++l) {
        auto rows = A.middleRows(static_cast<Eigen::Index>(l) * S, S);
        const Eigen::MatrixXcd& P = op.contrast_matrix(l);
        if (P.size() == 0)
            rows.setZero();
        else
            rows = -(P * rows);
    }
    A.diagonal().array() += 1.0;
    return A;
}

cplx synthesize_point(const CoeffTensor& c, const FrameParams& fp, const ZGrid& zg, double x, double z)
{
    const double t = (z - zg.z_min) / zg.delta;
    if (t < -1e-12 || t > zg.n_k + 1e-12) return 0.0;
    const int k0 = std::min(static_cast<int>(std::floor(std::max(t, 0.0))), zg.n_k);
    const double frac = t - k0;
    cvec g(static_cast<std::size_t>(fp.size()));
    for (int m = -fp.M; m <= fp.M; ++m)
        for (int n = -fp.N; n <= fp.N; ++n) g[static_cast<std::size_t>(fp.index(m, n))] = frame_element(x, m, n, fp);
    cplx v = (1.0 - frac) * simd::dotu(g.data(), c.slice(k0), g.size());
    if (frac > 0.0 && k0 < zg.n_k) v += frac * simd::dotu(g.data(), c.slice(k0 + 1), g.size());
    return v;
}

}  // namespace gew
