#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "gew/frame.hpp"
#include "gew/kernels.hpp"
#include "gew/tables.hpp"

namespace gew {

// Coefficients c[m,n,k] of sum c g_mn(x) Lambda_k(z). Slice-major: all (m,n)
// of node k are contiguous, in FrameParams::index order.
struct CoeffTensor {
    int M = 0, N = 0, n_k = 0;
    cvec data;

    static CoeffTensor zeros(const FrameParams& fp, const ZGrid& zg);
    int slice_size() const { return (2 * M + 1) * (2 * N + 1); }
    std::size_t size() const { return data.size(); }
    std::size_t index(int m, int n, int k) const
    {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(slice_size()) +
               static_cast<std::size_t>((m + M) * (2 * N + 1) + (n + N));
    }
    cplx& operator()(int m, int n, int k) { return data[index(m, n, k)]; }
    cplx operator()(int m, int n, int k) const { return data[index(m, n, k)]; }
    cplx* slice(int k) { return data.data() + index(-M, -N, k); }
    const cplx* slice(int k) const { return data.data() + index(-M, -N, k); }
    bool same_shape(const CoeffTensor& o) const { return M == o.M && N == o.N && n_k == o.n_k; }
    double norm() const;
};

CoeffTensor operator+(const CoeffTensor& a, const CoeffTensor& b);
CoeffTensor operator-(const CoeffTensor& a, const CoeffTensor& b);
CoeffTensor operator*(cplx s, const CoeffTensor& a);

using ContrastFn = std::function<double(double x, double z)>;

class DiscreteOperator {
public:
    // Throws DimensionMismatch when the tables do not cover the index ranges
    // of fp and dual, or were built for another z-grid or wavenumber.
    DiscreteOperator(std::shared_ptr<const KernelTable> spatial, std::shared_ptr<const KernelTable> spectral,
                     const DualWindow& dual, const FrameParams& fp, const ZGrid& zg, const ContrastFn& chi);

    const FrameParams& fp() const { return fp_; }
    const ZGrid& zg() const { return zg_; }
    double k0() const { return k0_; }
    const DualWindow& dual() const { return dual_; }
    const GaborBasis& basis() const { return *basis_; }
    const KernelTable& spatial_table() const { return *spatial_; }
    const KernelTable& spectral_table() const { return *spectral_; }
    // chi(x_i, z_l) on basis().grid()
    const std::vector<std::vector<double>>& chi_slices() const { return chi_; }
    std::size_t unknowns() const { return static_cast<std::size_t>(fp_.size()) * zg_.num_k(); }

    // Coupling weight from input (m,n) to output (s,t) at node offset k - l,
    // without the s-dependent phase; rise uses the triangle half above z_k,
    // fall the half below. Row layout: d + n_k.
    const cplx* rise_row(int mu, int n, int t) const { return rise_.data() + weight_index(mu, n, t); }
    const cplx* fall_row(int mu, int n, int t) const { return fall_.data() + weight_index(mu, n, t); }
    cplx phase(int s, int n, int t) const;
    // analysis * diag(chi_l) * synthesis, or empty when chi_l vanishes
    const Eigen::MatrixXcd& contrast_matrix(int l) const { return contrast_[static_cast<std::size_t>(l)]; }

private:
    std::size_t weight_index(int mu, int n, int t) const
    {
        const int nn = 2 * fp_.N + 1;
        return ((static_cast<std::size_t>(mu + 2 * fp_.M) * nn + static_cast<std::size_t>(n + fp_.N)) * nn +
                static_cast<std::size_t>(t + fp_.N)) *
               static_cast<std::size_t>(2 * zg_.n_k + 1);
    }
    void build_weights();
    void build_contrast(const ContrastFn& chi);

    std::shared_ptr<const KernelTable> spatial_, spectral_;
    DualWindow dual_;
    FrameParams fp_;
    ZGrid zg_;
    double k0_;
    std::unique_ptr<GaborBasis> basis_;
    std::vector<std::vector<double>> chi_;
    std::vector<cplx> rise_, fall_, phase_;
    std::vector<Eigen::MatrixXcd> contrast_;
};

// Scattered-field coefficients produced by the contrast source J.
CoeffTensor green_apply(const CoeffTensor& J, const DiscreteOperator& op);
// Per slice: synthesize, multiply by chi(x, z_l), analyze.
CoeffTensor contrast_multiply(const CoeffTensor& c, const DiscreteOperator& op);
// J - J_inc - contrast_multiply(green_apply(J)).
CoeffTensor forward(const CoeffTensor& J, const CoeffTensor& J_inc, const DiscreteOperator& op);
// I - C G in the CoeffTensor ordering. Throws SizeCap above max_unknowns.
Eigen::MatrixXcd assemble_dense(const DiscreteOperator& op, std::size_t max_unknowns = 8000);
// The Green part G alone.
Eigen::MatrixXcd assemble_green(const DiscreteOperator& op, std::size_t max_unknowns = 8000);

// Field sum c g_mn(x) Lambda_k(z) at arbitrary points; z outside the grid gives 0.
cplx synthesize_point(const CoeffTensor& c, const FrameParams& fp, const ZGrid& zg, double x, double z);

}  // namespace gew
