#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gew/frame.hpp"
#include "gew/green.hpp"
#include "gew/kernels.hpp"

namespace gew {

enum class TableKind : unsigned { spatial = 0, spectral = 1 };

const char* to_string(TableKind k);

// One-dimensional path integrals of f*g over the Ewald parameter, indexed by
// q in [-Q,Q], p in [-P,P], d in [-n_k, n_k]. Prefactors are applied by the
// operator.
struct KernelTable {
    TableKind kind = TableKind::spatial;
    FrameParams fp;
    ZGrid zg;
    EwaldConfig cfg;
    int Nu = 0, Nv = 0;
    int Q = 0, P = 0;
    std::vector<cplx> data;
    long evaluations = 0;

    int n_k() const { return zg.n_k; }
    std::size_t index(int q, int p, int d) const
    {
        return (static_cast<std::size_t>(q + Q) * (2 * P + 1) + static_cast<std::size_t>(p + P)) * (2 * n_k() + 1) +
               static_cast<std::size_t>(d + n_k());
    }
    cplx at(int q, int p, int d) const { return data[index(q, p, d)]; }
    // Pointer to the d-run for fixed (q,p), indexed by d + n_k.
    const cplx* row(int q, int p) const { return data.data() + index(q, p, -n_k()); }
    bool contains(int q, int p) const { return q >= -Q && q <= Q && p >= -P && p <= P; }
};

struct TableOptions {
    // Spatial: ln(xi) quadrature up to tail_factor*split, then t = 1/xi.
    double tail_factor = 100.0;
    // Spectral: straight contour segment ends at cap_factor/split.
    double cap_factor = 200.0;
    // (q,p) rows integrated together; fixed so results do not depend on the
    // machine.
    int chunk_rows = 64;
};

KernelTable build_spatial_table(const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu, int Nv,
                                const TableOptions& opt = {});
KernelTable build_spectral_table(const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu, int Nv,
                                 const TableOptions& opt = {});
KernelTable build_table(TableKind kind, const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu,
                        int Nv, const TableOptions& opt = {});

// Integration parameter beyond which the large-argument envelope of the
// integrand stays below cfg.trunc_tol; spatial values are xi (at most
// 100*split), spectral values are w (at most 200/split).
double truncation_point(TableKind kind, int q, int p, int d, const FrameParams& fp, const ZGrid& zg,
                        const EwaldConfig& cfg);

// Binary cache ("EGKT"). See docs/FORMATS.md.
std::uint64_t table_key(TableKind kind, const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu,
                        int Nv);
void write_table(const std::string& path, const KernelTable& t);
// Throws CacheError on malformed files.
KernelTable read_table(const std::string& path);
// Reads <dir>/<kind>-<key>.egkt when present and matching, otherwise builds
// and writes it. hit reports which happened.
KernelTable load_or_build_table(const std::string& dir, TableKind kind, const FrameParams& fp, const ZGrid& zg,
                                const EwaldConfig& cfg, int Nu, int Nv, bool* hit, const TableOptions& opt = {});

}  // namespace gew
