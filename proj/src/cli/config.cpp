#include "fracns/cli/config.hpp"

#include "fracns/criterion.hpp"
#include "fracns/grid.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>
#include <variant>

namespace fracns::cli {

bool operator==(const RunConfig& a, const RunConfig& b) {
    auto solver = [](const SolverConfig& s) { return std::tie(s.nu, s.dt, s.t_end, s.output_every, s.seed); };
    auto crit = [](const CriterionSettings& c) { return std::tie(c.s, c.q, c.delta, c.eta, c.c0); };
    auto init = [](const InitSpec& i) { return std::tie(i.kind, i.amplitude, i.spectrum_slope, i.peak_k); };
    auto out = [](const OutputSettings& o) {
        return std::tie(o.directory, o.emit_spectra, o.emit_structure, o.structure_orders, o.checkpoint_every);
    };
    return a.n == b.n && solver(a.solver) == solver(b.solver) && crit(a.criterion) == crit(b.criterion) &&
           init(a.init) == init(b.init) && out(a.outputs) == out(b.outputs);
}

namespace {

using Value = std::variant<double, bool, std::string, std::vector<double>>;

struct Entry {
    Value value;
    int line;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& text, int line) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(line, "expected a number, got '" + t + "'");
    return v;
}

// Drops a '#' comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        else if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

Value parse_value(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) fail(line, "missing value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
        const std::string body = v.substr(1, v.size() - 2);
        if (body.find_first_of("\"\\") != std::string::npos) fail(line, "escapes are not supported in strings");
        return body;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']') fail(line, "unterminated list");
        std::vector<double> out;
        const std::string body = trim(v.substr(1, v.size() - 2));
        if (body.empty()) return out;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_number(item, line));
        return out;
    }
    return parse_number(v, line);
}

std::map<std::string, Entry> tokenize(const std::string& text) {
    std::map<std::string, Entry> out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos) {
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) fail(lineno, "empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) fail(lineno, "missing key");
        if (section.empty()) fail(lineno, "key '" + key + "' appears before any [section]");
        const std::string full = section + "." + key;
        if (out.count(full)) fail(lineno, "duplicate key '" + full + "'");
        out.emplace(full, Entry{parse_value(t.substr(eq + 1), lineno), lineno});
    }
    return out;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    void number(const std::string& key, double& dst) {
        if (auto* e = take(key)) {
            if (!std::holds_alternative<double>(e->value)) fail(e->line, key + " must be a number");
            dst = std::get<double>(e->value);
        }
    }
    template <class Int>
    void integer(const std::string& key, Int& dst) {
        if (auto* e = take(key)) {
            if (!std::holds_alternative<double>(e->value)) fail(e->line, key + " must be an integer");
            const double v = std::get<double>(e->value);
            if (v != std::floor(v)) fail(e->line, key + " must be an integer");
            if (std::is_unsigned_v<Int> && v < 0) fail(e->line, key + " must be >= 0");
            dst = static_cast<Int>(v);
        }
    }
    void boolean(const std::string& key, bool& dst) {
        if (auto* e = take(key)) {
            if (!std::holds_alternative<bool>(e->value)) fail(e->line, key + " must be true or false");
            dst = std::get<bool>(e->value);
        }
    }
    void string(const std::string& key, std::string& dst) {
        if (auto* e = take(key)) {
            if (!std::holds_alternative<std::string>(e->value)) fail(e->line, key + " must be a quoted string");
            dst = std::get<std::string>(e->value);
        }
    }
    void list(const std::string& key, std::vector<double>& dst) {
        if (auto* e = take(key)) {
            if (!std::holds_alternative<std::vector<double>>(e->value)) fail(e->line, key + " must be a list");
            dst = std::get<std::vector<double>>(e->value);
        }
    }
    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }
    void finish() {
        for (const auto& [k, e] : entries_)
            if (!used_.count(k)) fail(e.line, "unknown key '" + k + "'");
    }

private:
    Entry* take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void validate(const RunConfig& cfg) {
    try {
        BoxSpec box(cfg.n);
        cfg.solver.validate();
        CriterionParams::make(cfg.criterion.s, cfg.criterion.q, cfg.criterion.delta, cfg.criterion.eta,
                              cfg.solver.nu);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("criterion constraint violated: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.criterion.c0 > 0.0)) throw ConfigError("criterion.c0 must be > 0");
    if (!(cfg.init.amplitude >= 0.0)) throw ConfigError("init.amplitude must be >= 0");
    if (cfg.init.kind == InitKind::RandomSpectrum && (cfg.init.peak_k < 1 || 3 * cfg.init.peak_k >= cfg.n))
        throw ConfigError("init.peak_k must satisfy 1 <= peak_k < n/3");
    if (cfg.outputs.directory.empty()) throw ConfigError("outputs.directory must not be empty");
    if (cfg.outputs.checkpoint_every < 0) throw ConfigError("outputs.checkpoint_every must be >= 0");
    if (cfg.outputs.emit_structure && cfg.outputs.structure_orders.empty())
        throw ConfigError("outputs.structure_orders must be nonempty when emit_structure is true");
    for (double p : cfg.outputs.structure_orders)
        if (!(p > 0.0)) throw ConfigError("outputs.structure_orders entries must be > 0");
}

RunConfig parse_config(const std::string& text) {
    Reader r(tokenize(text));
    RunConfig cfg;
    r.integer("grid.n", cfg.n);
    r.number("solver.nu", cfg.solver.nu);
    r.number("solver.dt", cfg.solver.dt);
    r.number("solver.t_end", cfg.solver.t_end);
    r.integer("solver.output_every", cfg.solver.output_every);
    r.integer("solver.seed", cfg.solver.seed);
    r.number("criterion.s", cfg.criterion.s);
    r.number("criterion.q", cfg.criterion.q);
    r.number("criterion.delta", cfg.criterion.delta);
    r.number("criterion.eta", cfg.criterion.eta);
    r.number("criterion.c0", cfg.criterion.c0);
    std::string kind = to_string(cfg.init.kind);
    r.string("init.kind", kind);
    try {
        cfg.init.kind = parse_init_kind(kind);
    } catch (const std::invalid_argument& e) {
        fail(r.line_of("init.kind"), e.what());
    }
    r.number("init.amplitude", cfg.init.amplitude);
    r.number("init.spectrum_slope", cfg.init.spectrum_slope);
    r.integer("init.peak_k", cfg.init.peak_k);
    r.string("outputs.directory", cfg.outputs.directory);
    r.boolean("outputs.emit_spectra", cfg.outputs.emit_spectra);
    r.boolean("outputs.emit_structure", cfg.outputs.emit_structure);
    r.list("outputs.structure_orders", cfg.outputs.structure_orders);
    r.integer("outputs.checkpoint_every", cfg.outputs.checkpoint_every);
    r.finish();
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[grid]\nn = " << cfg.n << "\n\n";
    os << "[solver]\nnu = " << fmt(cfg.solver.nu) << "\ndt = " << fmt(cfg.solver.dt)
       << "\nt_end = " << fmt(cfg.solver.t_end) << "\noutput_every = " << cfg.solver.output_every
       << "\nseed = " << cfg.solver.seed << "\n\n";
    os << "[criterion]\ns = " << fmt(cfg.criterion.s) << "\nq = " << fmt(cfg.criterion.q)
       << "\ndelta = " << fmt(cfg.criterion.delta) << "\neta = " << fmt(cfg.criterion.eta)
       << "\nc0 = " << fmt(cfg.criterion.c0) << "\n\n";
    os << "[init]\nkind = \"" << to_string(cfg.init.kind) << "\"\namplitude = " << fmt(cfg.init.amplitude)
       << "\nspectrum_slope = " << fmt(cfg.init.spectrum_slope) << "\npeak_k = " << cfg.init.peak_k << "\n\n";
    os << "[outputs]\ndirectory = \"" << cfg.outputs.directory << "\"\nemit_spectra = "
       << (cfg.outputs.emit_spectra ? "true" : "false")
       << "\nemit_structure = " << (cfg.outputs.emit_structure ? "true" : "false") << "\nstructure_orders = [";
    for (std::size_t i = 0; i < cfg.outputs.structure_orders.size(); ++i)
        os << (i ? ", " : "") << fmt(cfg.outputs.structure_orders[i]);
    os << "]\ncheckpoint_every = " << cfg.outputs.checkpoint_every << "\n";
    return os.str();
}

}  // namespace fracns::cli
