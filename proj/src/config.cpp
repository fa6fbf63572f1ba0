#include "ck/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ck/errors.hpp"
#include "ck/io.hpp"
#include "ck/numerics.hpp"

namespace ck {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = trim(cur);
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

// flat map with dotted keys from the nested document
std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::vector<std::string> stack;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line == "}") {
            if (stack.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unmatched '}'");
            stack.pop_back();
            continue;
        }
        if (line.back() == '{') {
            std::string name = trim(line.substr(0, line.size() - 1));
            if (name.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": block needs a name");
            stack.push_back(name);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
        std::string full;
        for (const auto& part : stack) full += part + ".";
        full += key;
        kv[full] = value;
    }
    if (!stack.empty()) throw ValidationError("config: unclosed block '" + stack.back() + "'");
    return kv;
}

} // namespace

double parse_number(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw ValidationError("parse_number: empty value");
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        double num = parse_number(t.substr(0, slash));
        double den = parse_number(t.substr(slash + 1));
        if (den == 0.0) throw ValidationError("parse_number: zero denominator in '" + t + "'");
        return num / den;
    }
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    double value = 0.0;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ValidationError("parse_number: cannot parse '" + t + "'");
    return value;
}

namespace {

class KvReader {
public:
    explicit KvReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    void number(const std::string& key, double& out) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        if (it->second == "auto") {
            out = -1.0;
        } else {
            out = parse_number(it->second);
        }
        used_.push_back(key);
    }

    void integer(const std::string& key, int& out) {
        double v = static_cast<double>(out);
        number(key, v);
        out = static_cast<int>(std::llround(v));
    }

    void unsigned64(const std::string& key, std::uint64_t& out) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        out = std::stoull(it->second);
        used_.push_back(key);
    }

    void text(const std::string& key, std::string& out) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        out = it->second;
        used_.push_back(key);
    }

    void number_list(const std::string& key, std::vector<double>& out) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        out.clear();
        for (const auto& part : split_list(it->second)) out.push_back(parse_number(part));
        used_.push_back(key);
    }

    void check_all_used() const {
        for (const auto& [key, value] : kv_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end())
                throw ValidationError("config: unknown key '" + key + "'");
        }
    }

private:
    std::map<std::string, std::string> kv_;
    std::vector<std::string> used_;
};

} // namespace

RunConfig parse_config_text(const std::string& text) {
    KvReader kv(parse_kv(text));
    RunConfig cfg;
    kv.text("mode", cfg.mode);
    kv.text("out", cfg.out_dir);
    kv.number("surface.K", cfg.K);
    kv.number("surface.L", cfg.L);
    kv.number("surface.gamma", cfg.gamma_c);
    kv.number("initial.r", cfg.initial.r);
    kv.number("initial.theta", cfg.initial.theta);
    kv.number("initial.p_r", cfg.initial.p_r);
    kv.number("initial.p_theta", cfg.initial.p_theta);
    kv.number("t_end", cfg.t_end);
    kv.number("tol", cfg.tol);
    kv.number("collision_margin", cfg.collision_margin);
    kv.number("block.h", cfg.block_h);
    kv.number("block.delta", cfg.block_delta);
    kv.number_list("sweep.beta", cfg.sweep_beta);
    kv.number_list("sweep.energy", cfg.sweep_energy);
    kv.number_list("blowup.theta_lines", cfg.blowup_theta_lines);
    kv.number("blowup.chi0", cfg.blowup_chi0);
    kv.integer("m_max", cfg.m_max);
    kv.unsigned64("seed", cfg.seed);
    kv.check_all_used();

    const char* modes[] = {"simulate", "blowup", "block-map", "classify", "verify", "sweep"};
    if (std::find(std::begin(modes), std::end(modes), cfg.mode) == std::end(modes))
        throw ValidationError("config: unknown mode '" + cfg.mode + "'");
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    return parse_config_text(io::read_text_file(path));
}

namespace {

std::string num_s(double v) { return num::format_shortest(v); }

std::string list_s(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += num_s(v[i]);
    }
    return out;
}

} // namespace

std::string effective_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "mode = " << cfg.mode << "\n";
    out << "out = " << cfg.out_dir << "\n";
    out << "surface {\n";
    out << "  K = " << num_s(cfg.K) << "\n";
    out << "  L = " << num_s(cfg.L) << "\n";
    out << "  gamma = " << num_s(cfg.gamma_c) << "\n";
    out << "}\n";
    out << "initial {\n";
    out << "  r = " << num_s(cfg.initial.r) << "\n";
    out << "  theta = " << num_s(cfg.initial.theta) << "\n";
    out << "  p_r = " << num_s(cfg.initial.p_r) << "\n";
    out << "  p_theta = " << num_s(cfg.initial.p_theta) << "\n";
    out << "}\n";
    out << "t_end = " << num_s(cfg.t_end) << "\n";
    out << "tol = " << num_s(cfg.tol) << "\n";
    out << "collision_margin = " << (cfg.collision_margin < 0 ? "auto" : num_s(cfg.collision_margin)) << "\n";
    out << "block {\n";
    out << "  h = " << num_s(cfg.block_h) << "\n";
    out << "  delta = " << (cfg.block_delta < 0 ? "auto" : num_s(cfg.block_delta)) << "\n";
    out << "}\n";
    if (!cfg.sweep_beta.empty() || !cfg.sweep_energy.empty()) {
        out << "sweep {\n";
        if (!cfg.sweep_beta.empty()) out << "  beta = " << list_s(cfg.sweep_beta) << "\n";
        if (!cfg.sweep_energy.empty()) out << "  energy = " << list_s(cfg.sweep_energy) << "\n";
        out << "}\n";
    }
    out << "blowup {\n";
    out << "  theta_lines = " << list_s(cfg.blowup_theta_lines) << "\n";
    out << "  chi0 = " << num_s(cfg.blowup_chi0) << "\n";
    out << "}\n";
    out << "m_max = " << cfg.m_max << "\n";
    out << "seed = " << cfg.seed << "\n";
    return out.str();
}

bool config_equivalent(const RunConfig& a, const RunConfig& b) {
    return a.mode == b.mode && a.out_dir == b.out_dir && a.K == b.K && a.L == b.L &&
           a.gamma_c == b.gamma_c && a.initial.r == b.initial.r &&
           a.initial.theta == b.initial.theta && a.initial.p_r == b.initial.p_r &&
           a.initial.p_theta == b.initial.p_theta && a.t_end == b.t_end && a.tol == b.tol &&
           a.collision_margin == b.collision_margin && a.block_h == b.block_h &&
           a.block_delta == b.block_delta && a.sweep_beta == b.sweep_beta &&
           a.sweep_energy == b.sweep_energy && a.blowup_theta_lines == b.blowup_theta_lines &&
           a.blowup_chi0 == b.blowup_chi0 && a.m_max == b.m_max && a.seed == b.seed;
}

} // namespace ck
