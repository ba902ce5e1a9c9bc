#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "gew/error.hpp"
#include "gew/quadrature.hpp"

namespace gew::quad {

const double GK21::x[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                            0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                            0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                            0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                            0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                            0.0};
const double GK21::wk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                             0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                             0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                             0.123491976262065851077600525478277, 0.134709217311473325928054001771707,
                             0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                             0.149445554002916905664936468389821};
const double GK21::wg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                            0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                            0.295524224714752870173892994651338};

namespace {

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const std::function<cplx(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx k = GK21::wk[10] * fc, g = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = h * GK21::x[i];
        const cplx s = f(c - dx) + f(c + dx);
        k += GK21::wk[i] * s;
        if (i % 2 == 1) g += GK21::wg[i / 2] * s;
    }
    k *= h;
    g *= h;
    return {a, b, k, std::abs(k - g)};
}

thread_local SeparableFailure g_last_failure;

}  // namespace

Result integrate(const std::function<cplx(double)>& f, const std::vector<double>& bp, const Options& opt)
{
    std::priority_queue<Panel> heap;
    cplx total = 0.0;
    double err = 0.0;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (bp[i + 1] == bp[i]) continue;
        Panel p = gk21(f, bp[i], bp[i + 1]);
        evals += 21;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int subdivisions = 0;
    while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (++subdivisions > opt.max_subdivisions)
            throw QuadratureFailure("adaptive quadrature exceeded " + std::to_string(opt.max_subdivisions) +
                                    " subdivisions (error estimate " + std::to_string(err) + ")");
        Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) throw QuadratureFailure("adaptive quadrature hit interval resolution limit");
        Panel l = gk21(f, p.a, m), r = gk21(f, m, p.b);
        evals += 42;
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
    }
    // Recompute the sum from the surviving panels to shed the drift of the
    // running update.
    cplx sum = 0.0;
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    return {sum, esum, evals};
}

Result integrate(const std::function<cplx(double)>& f, double a, double b, const Options& opt)
{
    return integrate(f, std::vector<double>{a, b}, opt);
}

namespace {

struct SeparableWork {
    const SeparableSegment* seg;
    int nf, ng;
    Eigen::MatrixXcd F, G, FK, FD;
    Eigen::MatrixXd A;  // sum of |F_i G_j| w over the panel, the roundoff scale of D
    long evaluations = 0;
    long panels = 0;

    SeparableWork(int nf_, int ng_) : seg(nullptr), nf(nf_), ng(ng_), F(nf_, 21), G(ng_, 21), FK(nf_, 21), FD(nf_, 21) {}

    // Returns Kronrod estimate and Kronrod-minus-Gauss difference.
    void panel(double a, double b, Eigen::MatrixXcd& K, Eigen::MatrixXcd* D)
    {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int n = 0; n < 21; ++n) {
            const double t = n < 10 ? c - h * GK21::x[n] : (n == 10 ? c : c + h * GK21::x[20 - n]);
            seg->eval(t, F.col(n).data(), G.col(n).data());
            const int i = n <= 10 ? n : 20 - n;
            const double wk = GK21::wk[i] * h;
            const double wg = (i % 2 == 1) ? GK21::wg[i / 2] * h : 0.0;
            FK.col(n) = F.col(n) * wk;
            FD.col(n) = F.col(n) * (wk - wg);
        }
        evaluations += 21;
        ++panels;
        K.noalias() = FK * G.transpose();
        if (D) {
            D->noalias() = FD * G.transpose();
            A.noalias() = FK.cwiseAbs() * G.cwiseAbs().transpose();
        }
    }
};

}  // namespace

SeparableResult integrate_separable(const std::vector<SeparableSegment>& segments, int nf, int ng,
                                    const SeparableOptions& opt)
{
    SeparableWork work(nf, ng);
    Eigen::MatrixXcd K(nf, ng), D(nf, ng);

    // Pass 1: coarse estimate on the initial partition sets per-entry scales.
    Eigen::MatrixXcd estimate = Eigen::MatrixXcd::Zero(nf, ng);
    for (const auto& s : segments) {
        work.seg = &s;
        for (std::size_t i = 0; i + 1 < s.breakpoints.size(); ++i) {
            work.panel(s.breakpoints[i], s.breakpoints[i + 1], K, nullptr);
            estimate += K;
        }
    }
    const double peak = estimate.cwiseAbs().maxCoeff();
    Eigen::MatrixXd tol = (estimate.cwiseAbs() * opt.rel_tol).cwiseMax(std::max(opt.floor_rel * peak, opt.abs_floor));
    if (peak == 0.0 && opt.abs_floor == 0.0) tol.setConstant(opt.floor_rel);

    // Pass 2: depth-first refinement with a length-proportional error budget.
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(nf, ng);
    const double nseg = static_cast<double>(segments.size());
    struct Item {
        double a, b;
        int depth;
    };
    for (const auto& s : segments) {
        work.seg = &s;
        const double len = s.breakpoints.back() - s.breakpoints.front();
        std::vector<Item> stack;
        for (std::size_t i = s.breakpoints.size() - 1; i-- > 0;) stack.push_back({s.breakpoints[i], s.breakpoints[i + 1], 0});
        while (!stack.empty()) {
            const Item it = stack.back();
            stack.pop_back();
            work.panel(it.a, it.b, K, &D);
            const double share = (it.b - it.a) / (len * nseg);
            // an entry is done once it meets its share of the budget or its
            // Kronrod-Gauss difference is down at rounding level
            const Eigen::MatrixXd ratio =
                D.cwiseAbs().cwiseQuotient((tol * share).cwiseMax(work.A * opt.noise_rel));
            Eigen::Index wi = 0, wj = 0;
            const double worst = ratio.maxCoeff(&wi, &wj);
            if (worst <= 1.0) {
                total += K;
                continue;
            }
            if (it.depth >= opt.max_depth) {
                g_last_failure = {static_cast<int>(wi), static_cast<int>(wj)};
                throw QuadratureFailure("separable quadrature exceeded depth " + std::to_string(opt.max_depth) +

                                        " at entry (" + std::to_string(wi) + "," + std::to_string(wj) +
                                        "), t in [" + std::to_string(it.a) + "," + std::to_string(it.b) + "]");
            }
            const double m = 0.5 * (it.a + it.b);
            stack.push_back({m, it.b, it.depth + 1});
            stack.push_back({it.a, m, it.depth + 1});
        }
    }
    return {std::move(total), work.evaluations, work.panels};
}

SeparableFailure last_separable_failure() { return g_last_failure; }

}  // namespace gew::quad
