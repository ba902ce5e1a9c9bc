#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gew/config.hpp"
#include "gew/error.hpp"

namespace gew {

namespace {

using json = nlohmann::json;

// One config block; records which keys were read so leftovers are reported.
class Block {
public:
    Block(const json& root, const std::string& name) : name_(name)
    {
        if (!root.contains(name)) {
            obj_ = json::object();
            return;
        }
        obj_ = root.at(name);
        if (!obj_.is_object()) throw ConfigError(name + ": expected an object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    double number(const std::string& key, double def)
    {
        used_.insert(key);
        if (!obj_.contains(key)) return def;
        const json& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(field(key) + ": must be finite");
        return d;
    }

    double positive(const std::string& key, double def)
    {
        const double d = number(key, def);
        if (!(d > 0.0)) throw ConfigError(field(key) + ": must be positive");
        return d;
    }

    int integer(const std::string& key, int def, int min_value)
    {
        used_.insert(key);
        if (!obj_.contains(key)) return def;
        const json& v = obj_.at(key);
        if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
        const long long i = v.get<long long>();
        if (i < min_value || i > 1000000) throw ConfigError(field(key) + ": out of range");
        return static_cast<int>(i);
    }

    std::string text(const std::string& key, const std::string& def)
    {
        used_.insert(key);
        if (!obj_.contains(key)) return def;
        const json& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
        return v.get<std::string>();
    }

    bool flag(const std::string& key, bool def)
    {
        used_.insert(key);
        if (!obj_.contains(key)) return def;
        const json& v = obj_.at(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
        return v.get<bool>();
    }

    const json& raw(const std::string& key)
    {
        used_.insert(key);
        return obj_.at(key);
    }

    std::string field(const std::string& key) const { return name_ + "." + key; }

    void finish() const
    {
        for (const auto& [k, v] : obj_.items())
            if (!used_.count(k)) throw ConfigError(field(k) + ": unknown field");
    }

private:
    std::string name_;
    json obj_;
    std::set<std::string> used_;
};

void read_scene(Block& b, RunConfig& c)
{
    Scene& s = c.scene;
    const std::string shape = b.text("shape", "circle");
    if (shape == "circle") {
        s.shape = Circle{b.positive("radius", 1.35)};
    } else if (shape == "rectangle") {
        const double w = b.positive("width", 5.0);
        s.shape = Rectangle{w, b.positive("height", 2.0)};
    } else if (shape == "grating") {
        Grating g;
        g.n_blocks = b.integer("n_blocks", 5, 1);
        g.block_w = b.positive("block_w", 1.0);
        g.block_h = b.positive("block_h", 1.4);
        g.spacing = b.positive("spacing", 2.0);
        s.shape = g;
    } else {
        throw ConfigError(b.field("shape") + ": expected circle, rectangle or grating (got '" + shape + "')");
    }
    s.eps_r = b.number("eps_r", 2.0);
    if (!(s.eps_r >= 1.0)) throw ConfigError(b.field("eps_r") + ": must be >= 1");
    s.k0 = b.positive("k0", 1.45);
    const double theta_deg = b.number("theta_deg", 0.0);
    if (theta_deg < 0.0 || theta_deg >= 360.0) throw ConfigError(b.field("theta_deg") + ": must lie in [0, 360)");
    s.theta = theta_deg * pi / 180.0;
    s.E0 = b.number("E0", 1.0);
    if (b.has("center")) {
        const json& v = b.raw("center");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(b.field("center") + ": expected [x, z]");
        s.cx = v[0].get<double>();
        s.cz = v[1].get<double>();
    }
    b.finish();
    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("scene: ") + e.what());
    }
}

void read_frame(Block& b, RunConfig& c)
{
    FrameParams& f = c.frame;
    f.X = b.positive("X", 0.5);
    f.M = b.integer("M", 6, 0);
    f.N = b.integer("N", 3, 0);
    f.alpha = b.positive("alpha", std::sqrt(2.0 / 3.0));
    f.beta = b.positive("beta", std::sqrt(2.0 / 3.0));
    b.finish();
    try {
        f.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("frame: ") + e.what());
    }
}

void read_zgrid(Block& b, RunConfig& c)
{
    const double z_min = b.number("z_min", -1.4);
    const double z_max = b.number("z_max", 1.4);
    const double delta = b.positive("delta", 0.05);
    b.finish();
    if (!(z_max > z_min)) throw ConfigError("zgrid.z_max: must exceed zgrid.z_min");
    const double steps = (z_max - z_min) / delta;
    const int n_k = static_cast<int>(std::lround(steps));
    if (std::abs(steps - n_k) > 1e-6 * std::max(1.0, steps))
        throw ConfigError("zgrid: z_max - z_min must be a whole number of delta steps");
    c.zgrid = ZGrid{z_min, z_max, delta, n_k};
    try {
        c.zgrid.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("zgrid: ") + e.what());
    }
}

void read_dual(Block& b, RunConfig& c)
{
    c.dual.Nu = b.integer("N_u", 2, 0);
    c.dual.Nv = b.integer("N_v", 3, 0);
    c.dual.fit_tol = b.positive("fit_tol", 0.05);
    c.dual.criterion = b.text("criterion", "biorthogonal");
    if (c.dual.criterion != "biorthogonal" && c.dual.criterion != "l2")
        throw ConfigError(b.field("criterion") + ": expected biorthogonal or l2");
    b.finish();
}

void read_ewald(Block& b, RunConfig& c)
{
    EwaldConfig& e = c.ewald;
    e.k0 = c.scene.k0;
    e.quad_tol = b.positive("quad_tol", 1e-10);
    e.trunc_tol = b.positive("trunc_tol", 1e-14);
    c.split_auto = true;
    if (b.has("split")) {
        const json& v = b.raw("split");
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") throw ConfigError(b.field("split") + ": expected \"auto\" or a number");
        } else if (v.is_number() && v.get<double>() > 0.0) {
            c.split_auto = false;
            e.split = v.get<double>();
        } else {
            throw ConfigError(b.field("split") + ": expected \"auto\" or a positive number");
        }
    }
    b.finish();
    if (c.split_auto) e.split = optimal_split(e.k0, c.zgrid.delta);
    try {
        e.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(std::string("ewald: ") + err.what());
    }
}

void read_solver(Block& b, RunConfig& c)
{
    c.solver.method = parse_method(b.text("method", "auto"));
    c.solver.tol = b.has("tol") ? b.positive("tol", 1e-8) : 0.0;
    c.solver.max_iterations = b.integer("max_iterations", 2000, 1);
    c.solver.restart = b.integer("restart", 60, 1);
    c.solver.dense_cap = static_cast<std::size_t>(b.integer("dense_cap", 8000, 1));
    b.finish();
}

void read_output(Block& b, RunConfig& c)
{
    OutputConfig& o = c.output;
    o.x_min = b.number("x_min", 0.0);
    o.x_max = b.number("x_max", 0.0);
    o.z_min = b.number("z_min", 0.0);
    o.z_max = b.number("z_max", 0.0);
    o.nx = b.integer("nx", 121, 1);
    o.nz = b.integer("nz", 57, 1);
    o.out_dir = b.text("out_dir", "out");
    if (b.has("formats")) {
        const json& v = b.raw("formats");
        if (!v.is_array()) throw ConfigError(b.field("formats") + ": expected a list");
        o.csv = o.pgm = false;
        for (const json& f : v) {
            if (!f.is_string()) throw ConfigError(b.field("formats") + ": entries must be strings");
            const std::string s = f.get<std::string>();
            if (s == "csv")
                o.csv = true;
            else if (s == "pgm")
                o.pgm = true;
            else
                throw ConfigError(b.field("formats") + ": unknown format '" + s + "'");
        }
    }
    b.finish();
    if (o.x_max < o.x_min || o.z_max < o.z_min) throw ConfigError("output: max bounds must not be below min bounds");
}

void read_cache(Block& b, RunConfig& c)
{
    c.cache.enabled = b.flag("enabled", true);
    c.cache.path = b.text("path", ".gew-cache");
    b.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source)
{
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based; report the line as well
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError(source + ":" + std::to_string(line) + ": syntax error: " + e.what());
    }
    if (!root.is_object()) throw ConfigError(source + ": top level must be an object");
    static const std::set<std::string> blocks{"scene", "frame", "zgrid", "dual", "ewald", "solver", "output", "cache"};
    for (const auto& [k, v] : root.items())
        if (!blocks.count(k)) throw ConfigError(k + ": unknown block");

    RunConfig c;
    c.source = source;
    Block scene(root, "scene"), frame(root, "frame"), zgrid(root, "zgrid"), dual(root, "dual"),
        ewald(root, "ewald"), solver(root, "solver"), output(root, "output"), cache(root, "cache");
    read_scene(scene, c);
    read_frame(frame, c);
    read_zgrid(zgrid, c);
    read_dual(dual, c);
    read_ewald(ewald, c);
    read_solver(solver, c);
    read_output(output, c);
    read_cache(cache, c);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

FieldGrid output_grid(const RunConfig& cfg)
{
    const OutputConfig& o = cfg.output;
    double x0 = o.x_min, x1 = o.x_max, z0 = o.z_min, z1 = o.z_max;
    if (x0 == x1) {
        const double reach = cfg.frame.M * cfg.frame.alpha * cfg.frame.X;
        x0 = -reach;
        x1 = reach;
    }
    if (z0 == z1) {
        z0 = cfg.zgrid.z_min;
        z1 = cfg.zgrid.z_max;
    }
    return FieldGrid::make(x0, x1, o.nx, z0, z1, o.nz);
}

}  // namespace gew
