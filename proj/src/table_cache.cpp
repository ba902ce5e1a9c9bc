#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gew/error.hpp"
#include "gew/tables.hpp"

namespace gew {

namespace {

constexpr char kMagic[4] = {'E', 'G', 'K', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class U>
U to_le(U v)
{
    if constexpr (std::endian::native == std::endian::big) {
        U r = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) r = static_cast<U>((r << 8) | ((v >> (8 * i)) & 0xff));
        return r;
    }
    return v;
}

class Writer {
public:
    void u32(std::uint32_t v)
    {
        v = to_le(v);
        raw(&v, 4);
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v)
    {
        std::uint64_t b = to_le(std::bit_cast<std::uint64_t>(v));
        raw(&b, 8);
    }
    void raw(const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); }
    std::string buf;
};

class Reader {
public:
    explicit Reader(std::string b) : buf(std::move(b)) {}
    std::uint32_t u32()
    {
        std::uint32_t v;
        raw(&v, 4);
        return to_le(v);
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64()
    {
        std::uint64_t b;
        raw(&b, 8);
        return std::bit_cast<double>(to_le(b));
    }
    void raw(void* p, std::size_t n)
    {
        if (pos + n > buf.size()) throw CacheError("table cache truncated");
        std::memcpy(p, buf.data() + pos, n);
        pos += n;
    }
    std::size_t remaining() const { return buf.size() - pos; }

private:
    std::string buf;
    std::size_t pos = 0;
};

// Everything that determines the table contents, in file order.
void write_metadata(Writer& w, TableKind kind, const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg,
                    int Nu, int Nv)
{
    w.u32(static_cast<std::uint32_t>(kind));
    w.f64(fp.X);
    w.f64(fp.alpha);
    w.f64(fp.beta);
    w.i32(fp.M);
    w.i32(fp.N);
    w.f64(zg.z_min);
    w.f64(zg.z_max);
    w.f64(zg.delta);
    w.i32(zg.n_k);
    w.f64(cfg.split);
    w.f64(cfg.k0);
    w.f64(cfg.quad_tol);
    w.f64(cfg.trunc_tol);
    w.i32(Nu);
    w.i32(Nv);
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t table_key(TableKind kind, const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu,
                        int Nv)
{
    Writer w;
    w.u32(kVersion);
    write_metadata(w, kind, fp, zg, cfg, Nu, Nv);
    return fnv1a(w.buf);
}

void write_table(const std::string& path, const KernelTable& t)
{
    Writer w;
    w.raw(kMagic, 4);
    w.u32(kVersion);
    write_metadata(w, t.kind, t.fp, t.zg, t.cfg, t.Nu, t.Nv);
    w.i32(t.Q);
    w.i32(t.P);
    w.u32(static_cast<std::uint32_t>(t.data.size()));
    for (const cplx& z : t.data) {
        w.f64(z.real());
        w.f64(z.imag());
    }
    // write then rename so a reader never sees a partial file
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write table cache " + tmp);
        out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
        if (!out) throw CacheError("cannot write table cache " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw CacheError("cannot rename table cache to " + path + ": " + ec.message());
}

KernelTable read_table(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open table cache " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Reader r(ss.str());
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw CacheError("bad magic in " + path);
    if (const std::uint32_t v = r.u32(); v != kVersion)
        throw CacheError("unsupported table cache version " + std::to_string(v));
    KernelTable t;
    const std::uint32_t kind = r.u32();
    if (kind > 1) throw CacheError("bad table kind in " + path);
    t.kind = static_cast<TableKind>(kind);
    t.fp.X = r.f64();
    t.fp.alpha = r.f64();
    t.fp.beta = r.f64();
    t.fp.M = r.i32();
    t.fp.N = r.i32();
    t.zg.z_min = r.f64();
    t.zg.z_max = r.f64();
    t.zg.delta = r.f64();
    t.zg.n_k = r.i32();
    t.cfg.split = r.f64();
    t.cfg.k0 = r.f64();
    t.cfg.quad_tol = r.f64();
    t.cfg.trunc_tol = r.f64();
    t.Nu = r.i32();
    t.Nv = r.i32();
    t.Q = r.i32();
    t.P = r.i32();
    const std::uint32_t n = r.u32();
    if (t.Q < 0 || t.P < 0 || t.zg.n_k < 1 ||
        static_cast<std::size_t>(n) != static_cast<std::size_t>(2 * t.Q + 1) * (2 * t.P + 1) * (2 * t.zg.n_k + 1))
        throw CacheError("inconsistent table dimensions in " + path);
    if (r.remaining() != static_cast<std::size_t>(n) * 16) throw CacheError("table cache size mismatch in " + path);
    t.data.resize(n);
    for (cplx& z : t.data) {
        const double re = r.f64();
        z = cplx(re, r.f64());
    }
    return t;
}

KernelTable load_or_build_table(const std::string& dir, TableKind kind, const FrameParams& fp, const ZGrid& zg,
                                const EwaldConfig& cfg, int Nu, int Nv, bool* hit, const TableOptions& opt)
{
    char name[64];
    std::snprintf(name, sizeof name, "%s-%016llx.egkt", to_string(kind),
                  static_cast<unsigned long long>(table_key(kind, fp, zg, cfg, Nu, Nv)));
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    if (std::filesystem::exists(path)) {
        try {
            KernelTable t = read_table(path.string());
            if (table_key(t.kind, t.fp, t.zg, t.cfg, t.Nu, t.Nv) == table_key(kind, fp, zg, cfg, Nu, Nv)) {
                if (hit) *hit = true;
                return t;
            }
        } catch (const CacheError&) {
            // stale or damaged entry; rebuild below
        }
    }
    if (hit) *hit = false;
    KernelTable t = build_table(kind, fp, zg, cfg, Nu, Nv, opt);
    std::filesystem::create_directories(dir);
    write_table(path.string(), t);
    return t;
}

}  // namespace gew
