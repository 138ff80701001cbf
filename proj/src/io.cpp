#include "ymflow/io.hpp"

#include <json.hpp>
#include <zlib.h>

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ymflow/initial.hpp"

namespace ymflow {

using nlohmann::json;

std::string bc_name(Bc bc) {
    switch (bc) {
        case Bc::Periodic: return "periodic";
        case Bc::Dirichlet: return "dirichlet";
        case Bc::Neumann: return "neumann";
    }
    return "?";
}

Bc bc_from_name(const std::string& s) {
    if (s == "periodic") return Bc::Periodic;
    if (s == "dirichlet") return Bc::Dirichlet;
    if (s == "neumann") return Bc::Neumann;
    throw ConfigError("grid.bc: unknown value '" + s + "'");
}

GroupSpec RunConfig::group_spec() const {
    if (group == "u1") return GroupSpec::u1();
    if (group == "su2") return GroupSpec::su2();
    throw ConfigError("group: unknown value '" + group + "'");
}

void RunConfig::validate() const {
    group_spec();
    if (grid.n[0] < 2 || grid.n[1] < 2 || grid.n[2] < 2)
        throw ConfigError("grid.n: each entry must be >= 2");
    if (!(grid.h > 0.0)) throw ConfigError("grid.h: must be positive");
    if (!(t_max > 0.0)) throw ConfigError("t_max: must be positive");
    if (!(cfl_safety > 0.0)) throw ConfigError("cfl_safety: must be positive");
    if (dt && !(*dt > 0.0)) throw ConfigError("dt: must be positive");
    if (record_every < 0) throw ConfigError("record_every: must be >= 0");
    if (!(geo_ratio > 1.0)) throw ConfigError("geo_ratio: must exceed 1");
    if (n_max < 0 || n_max > 8) throw ConfigError("n_max: must be in 0..8");
    if (!(kappa > 0.0)) throw ConfigError("kappa: must be positive");
    if (init.kind != "zero" && init.kind != "fourier-smooth" && init.kind != "rough-gauge" &&
        init.kind != "snapshot")
        throw ConfigError("init.kind: unknown value '" + init.kind + "'");
    if (init.kind == "rough-gauge" && !(init.roughness_p > 0.0))
        throw ConfigError("init.roughness_p: must be positive");
    if (init.kind == "snapshot" && init.snapshot_path.empty())
        throw ConfigError("init.snapshot_path: required for snapshot initial data");
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("unknown config key: " + prefix + it.key());
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    reject_unknown(j, {"group", "grid", "init", "t_max", "cfl_safety", "dt", "record_every",
                       "geo_ratio", "n_max", "kappa", "out_dir"},
                   "");
    try {
        if (j.contains("group")) c.group = j["group"].get<std::string>();
        if (j.contains("grid")) {
            auto& g = j["grid"];
            reject_unknown(g, {"n", "h", "bc"}, "grid.");
            if (g.contains("n")) {
                auto v = g["n"];
                if (!v.is_array() || v.size() != 3) throw ConfigError("grid.n: need 3 integers");
                for (int i = 0; i < 3; ++i) c.grid.n[i] = v[i].get<int>();
            }
            if (g.contains("h")) c.grid.h = g["h"].get<double>();
            if (g.contains("bc")) c.grid.bc = bc_from_name(g["bc"].get<std::string>());
        }
        if (j.contains("init")) {
            auto& i = j["init"];
            reject_unknown(i,
                           {"kind", "seed", "amplitude", "roughness_p", "perturb_amplitude",
                            "max_mode", "mc_dir", "snapshot_path"},
                           "init.");
            if (i.contains("kind")) c.init.kind = i["kind"].get<std::string>();
            if (i.contains("seed")) c.init.seed = i["seed"].get<std::uint64_t>();
            if (i.contains("amplitude")) c.init.amplitude = i["amplitude"].get<double>();
            if (i.contains("roughness_p")) c.init.roughness_p = i["roughness_p"].get<double>();
            if (i.contains("perturb_amplitude"))
                c.init.perturb_amplitude = i["perturb_amplitude"].get<double>();
            if (i.contains("max_mode")) c.init.max_mode = i["max_mode"].get<int>();
            if (i.contains("mc_dir")) c.init.mc_dir = i["mc_dir"].get<int>();
            if (i.contains("snapshot_path"))
                c.init.snapshot_path = i["snapshot_path"].get<std::string>();
        }
        if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
        if (j.contains("cfl_safety")) c.cfl_safety = j["cfl_safety"].get<double>();
        if (j.contains("dt")) c.dt = j["dt"].get<double>();
        if (j.contains("record_every")) c.record_every = j["record_every"].get<long>();
        if (j.contains("geo_ratio")) c.geo_ratio = j["geo_ratio"].get<double>();
        if (j.contains("n_max")) c.n_max = j["n_max"].get<int>();
        if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
        if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config_json(const RunConfig& c) {
    json j;
    j["group"] = c.group;
    j["grid"] = {{"n", {c.grid.n[0], c.grid.n[1], c.grid.n[2]}},
                 {"h", c.grid.h},
                 {"bc", bc_name(c.grid.bc)}};
    j["init"] = {{"kind", c.init.kind},
                 {"seed", c.init.seed},
                 {"amplitude", c.init.amplitude},
                 {"roughness_p", c.init.roughness_p},
                 {"perturb_amplitude", c.init.perturb_amplitude},
                 {"max_mode", c.init.max_mode},
                 {"mc_dir", c.init.mc_dir},
                 {"snapshot_path", c.init.snapshot_path}};
    j["t_max"] = c.t_max;
    j["cfl_safety"] = c.cfl_safety;
    if (c.dt) j["dt"] = *c.dt;
    j["record_every"] = c.record_every;
    j["geo_ratio"] = c.geo_ratio;
    j["n_max"] = c.n_max;
    j["kappa"] = c.kappa;
    j["out_dir"] = c.out_dir;
    return j.dump(2);
}

std::string config_hash(const RunConfig& c) {
    std::string s = canonical_config_json(c);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

Connection build_initial_data(const RunConfig& c) {
    GroupSpec g = c.group_spec();
    if (c.init.kind == "zero") return zero_connection(c.grid, g);
    if (c.init.kind == "fourier-smooth")
        return fourier_smooth_connection(c.grid, g, c.init.seed, c.init.amplitude,
                                         c.init.max_mode);
    if (c.init.kind == "rough-gauge") {
        GaugeField gf = rough_gauge_generator(c.grid, g, c.init.roughness_p, c.init.amplitude,
                                              c.init.seed, c.init.mc_dir);
        FormField a = maurer_cartan(gf);
        if (c.init.perturb_amplitude != 0.0) {
            FormField pert = rough_divfree_perturbation(c.grid, g, c.init.roughness_p,
                                                        c.init.perturb_amplitude,
                                                        c.init.seed + 777);
            a += pert;
        }
        return Connection(std::move(a));
    }
    if (c.init.kind == "snapshot") {
        Snapshot s = read_snapshot(c.init.snapshot_path);
        if (!(s.A.grid() == c.grid))
            throw IoError("snapshot: grid does not match the configured grid");
        if (s.A.group().label != g.label) throw IoError("snapshot: group mismatch");
        return s.A;
    }
    throw ConfigError("init.kind: unknown value '" + c.init.kind + "'");
}

// ----------------------------------------------------------------- CSV

void write_text_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot rename " + tmp + " to " + path);
}

void write_series(const std::string& path, const FlowSeries& s) {
    std::ostringstream out;
    for (std::size_t i = 0; i < s.cols.size(); ++i) out << (i ? "," : "") << s.cols[i];
    out << "\n";
    char buf[64];
    for (const auto& row : s.rows) {
        if (row.size() != s.cols.size()) throw IoError("write_series: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == 0) {
                std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(row[0]));
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            }
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

FlowSeries read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    FlowSeries s;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    s.cols = split_csv(line);
    static const char* required[] = {"step", "t",   "dt",     "B_L2", "Aprime_L2",
                                     "B_L6", "rho", "lambda", "psi"};
    for (auto* r : required) {
        bool found = false;
        for (auto& c : s.cols) found = found || c == r;
        if (!found) throw IoError(path + ": missing column " + r);
    }
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != s.cols.size())
            throw IoError(path + ": parse error at line " + std::to_string(lineno) + ": expected " +
                          std::to_string(s.cols.size()) + " fields, got " +
                          std::to_string(f.size()));
        std::vector<double> row(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            char* end = nullptr;
            row[i] = std::strtod(f[i].c_str(), &end);
            if (end == f[i].c_str() || *end != '\0')
                throw IoError(path + ": parse error at line " + std::to_string(lineno) +
                              ", field " + s.cols[i]);
        }
        s.rows.push_back(std::move(row));
    }
    for (auto& c : s.cols) {
        if (c.size() > 1 && c[0] == 'A' && std::isdigit(static_cast<unsigned char>(c[1])))
            s.n_max = std::max(s.n_max, c[1] - '0');
    }
    return s;
}

// ------------------------------------------------------------- snapshot

namespace {

constexpr char kMagic[4] = {'Y', 'M', 'H', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& s, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

struct Reader {
    const std::string& s;
    std::size_t pos = 0;
    explicit Reader(const std::string& str) : s(str) {}
    void need(std::size_t n) const {
        if (pos + n > s.size()) throw IoError("snapshot: truncated file");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(s[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos++])) << (8 * i);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[pos++])) << (8 * i);
        double d;
        std::memcpy(&d, &u, 8);
        return d;
    }
};

// lexicographic (x, y, z, direction) edge walk shared by writer and reader
template <typename F>
void walk_edges(const GridSpec& g, F&& f) {
    const bool per = g.periodic();
    const int ux = per ? g.n[0] - 1 : g.n[0];
    const int uy = per ? g.n[1] - 1 : g.n[1];
    const int uz = per ? g.n[2] - 1 : g.n[2];
    for (int x = 0; x <= ux; ++x)
        for (int y = 0; y <= uy; ++y)
            for (int z = 0; z <= uz; ++z)
                for (int d = 0; d < 3; ++d) {
                    const int c[3] = {x, y, z};
                    if (c[d] > g.n[d] - 1) continue;  // box: no edge beyond the last cell
                    f(x, y, z, d);
                }
}

}  // namespace

void write_snapshot(const std::string& path, const Connection& A, double t) {
    const GridSpec& g = A.grid();
    std::string payload;
    payload.reserve(A.a.size() * 8);
    walk_edges(g, [&](int x, int y, int z, int d) {
        for (int a = 0; a < A.group().dim_k; ++a) put_f64(payload, A.a.at(d, a, x, y, z));
    });

    std::string head;
    head.append(kMagic, 4);
    put_u32(head, kVersion);
    head.push_back(static_cast<char>(A.group().label == Group::U1 ? 0 : 1));
    head.push_back(static_cast<char>(g.bc == Bc::Periodic ? 0 : (g.bc == Bc::Dirichlet ? 1 : 2)));
    put_u32(head, static_cast<std::uint32_t>(g.n[0]));
    put_u32(head, static_cast<std::uint32_t>(g.n[1]));
    put_u32(head, static_cast<std::uint32_t>(g.n[2]));
    put_f64(head, g.h);
    put_f64(head, t);

    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), payload.size()));
    std::string tail;
    put_u32(tail, crc);

    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp);
        out << head << payload << tail;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot rename " + tmp);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string buf = ss.str();
    Reader r(buf);

    r.need(4);
    if (std::memcmp(buf.data(), kMagic, 4) != 0) throw IoError("snapshot: bad magic");
    r.pos = 4;
    std::uint32_t ver = r.u32();
    if (ver != kVersion) throw IoError("snapshot: unsupported version " + std::to_string(ver));
    std::uint8_t gc = r.u8();
    std::uint8_t bc = r.u8();
    if (gc > 1) throw IoError("snapshot: bad group code");
    if (bc > 2) throw IoError("snapshot: bad bc code");
    GridSpec g;
    g.n[0] = static_cast<int>(r.u32());
    g.n[1] = static_cast<int>(r.u32());
    g.n[2] = static_cast<int>(r.u32());
    g.h = r.f64();
    g.bc = bc == 0 ? Bc::Periodic : (bc == 1 ? Bc::Dirichlet : Bc::Neumann);
    double t = r.f64();
    g.validate();

    GroupSpec grp = gc == 0 ? GroupSpec::u1() : GroupSpec::su2();
    FormField a(1, g, grp);
    std::size_t nvals = 0;
    walk_edges(g, [&](int, int, int, int) { nvals += grp.dim_k; });
    std::size_t payload_bytes = nvals * 8;
    std::size_t payload_start = r.pos;
    if (buf.size() != payload_start + payload_bytes + 4)
        throw IoError("snapshot: size mismatch (dimension or truncation)");

    std::uint32_t crc = static_cast<std::uint32_t>(crc32(
        0L, reinterpret_cast<const Bytef*>(buf.data() + payload_start), payload_bytes));
    Reader tail(buf);
    tail.pos = payload_start + payload_bytes;
    std::uint32_t want = tail.u32();
    if (crc != want) throw IoError("snapshot: checksum mismatch");

    walk_edges(g, [&](int x, int y, int z, int d) {
        for (int c = 0; c < grp.dim_k; ++c) a.at(d, c, x, y, z) = r.f64();
    });
    return Snapshot{Connection(std::move(a)), t};
}

}  // namespace ymflow
