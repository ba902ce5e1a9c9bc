#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gew/error.hpp"
#include "gew/output.hpp"

namespace gew {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw Error("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void write_field_csv(const std::string& path, const FieldGrid& g)
{
    std::string s = "x,z,re,im\n";
    s.reserve(static_cast<std::size_t>(g.nx) * g.nz * 90);
    for (int iz = 0; iz < g.nz; ++iz)
        for (int ix = 0; ix < g.nx; ++ix) {
            const cplx v = g.at(ix, iz);
            s += format_double(g.x(ix));
            s += ',';
            s += format_double(g.z(iz));
            s += ',';
            s += format_double(v.real());
            s += ',';
            s += format_double(v.imag());
            s += '\n';
        }
    write_text_file(path, s);
}

void write_field_pgm(const std::string& path, const FieldGrid& g)
{
    double lo = INFINITY, hi = -INFINITY;
    for (const cplx& v : g.values) {
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
    }
    if (g.values.empty()) lo = hi = 0.0;
    std::string s = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.nz) + "\n255\n";
    const double span = hi - lo;
    for (int iz = 0; iz < g.nz; ++iz)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double t = span > 0.0 ? (g.at(ix, iz).real() - lo) / span : 0.0;
            s += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0))));
        }
    write_text_file(path, s);
    nlohmann::ordered_json meta;
    meta["quantity"] = "real part";
    meta["min"] = lo;
    meta["max"] = hi;
    meta["nx"] = g.nx;
    meta["nz"] = g.nz;
    meta["x_min"] = g.x_min;
    meta["x_max"] = g.x_max;
    meta["z_min"] = g.z_min;
    meta["z_max"] = g.z_max;
    write_text_file(path + ".json", meta.dump(2) + "\n");
}

}  // namespace gew
