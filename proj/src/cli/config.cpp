#include "invman/cli/config.hpp"

#include "invman/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace invman::cli {

namespace {

struct Entry {
    std::string value;
    int line;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw Error(ErrorKind::Config, source_ + ":" + std::to_string(line) + ": " + msg);
    }

    double number(const Entry& e, std::string_view key) const {
        const std::string text = trim(e.value);
        double v = 0.0;
        const auto* first = text.data();
        const auto* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
            fail(e.line, "malformed number for '" + std::string(key) + "': '" + text + "'");
        }
        return v;
    }

    int integer(const Entry& e, std::string_view key) const {
        const std::string text = trim(e.value);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
            fail(e.line, "malformed integer for '" + std::string(key) + "': '" + text + "'");
        }
        return v;
    }

    std::vector<double> list(const Entry& e, std::string_view key) const {
        std::vector<double> out;
        std::string item;
        std::istringstream in(e.value);
        while (std::getline(in, item, ',')) out.push_back(number(Entry{item, e.line}, key));
        if (out.empty()) fail(e.line, "empty list for '" + std::string(key) + "'");
        return out;
    }

    bool boolean(const Entry& e, std::string_view key) const {
        const std::string text = trim(e.value);
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        fail(e.line, "malformed boolean for '" + std::string(key) + "': '" + text + "'");
    }

private:
    std::string source_;
};

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"family", "C", "gamma", "delta", "epsilon", "a", "b", "c", "eta", "reversed"}},
        {"solve", {"order", "scale", "branch", "trialOrder"}},
        {"residual", {"zMin", "zMax", "zStep"}},
        {"continue", {"parameter", "start", "stop", "steps", "values"}},
        {"output", {"directory", "stem"}},
    };
    return keys;
}

std::set<std::string> family_keys(Family f) {
    switch (f) {
        case Family::StandardMapK: return {"C"};
        case Family::FrenkelKontorova: return {"gamma", "delta", "C"};
        case Family::HeisenbergXY: return {"epsilon"};
        case Family::Froeschle: return {"a", "b", "c"};
        case Family::McMillan: return {"eta"};
        case Family::RationalExample: return {};
    }
    return {};
}

ModelSpec build_model(const Parser& p, const Section& s, int section_line) {
    const auto fam_it = s.find("family");
    if (fam_it == s.end()) p.fail(section_line, "[model] needs a 'family' key");
    const std::string name = trim(fam_it->second.value);
    const auto family = family_from_name(name);
    if (!family) p.fail(fam_it->second.line, "unknown family '" + name + "'");

    const auto wanted = family_keys(*family);
    for (const auto& [key, entry] : s) {
        if (key == "family" || key == "reversed") continue;
        if (!wanted.count(key)) {
            p.fail(entry.line, "key '" + key + "' does not apply to family " + name);
        }
    }
    for (const auto& key : wanted) {
        if (!s.count(key)) p.fail(section_line, "family " + name + " needs key '" + key + "'");
    }
    auto num = [&](const char* key) { return p.number(s.at(key), key); };
    auto lst = [&](const char* key) { return p.list(s.at(key), key); };

    FamilyParams params;
    switch (*family) {
        case Family::StandardMapK: params = StandardMapParams{lst("C")}; break;
        case Family::FrenkelKontorova:
            params = FrenkelKontorovaParams{lst("gamma"), num("delta"), lst("C")};
            break;
        case Family::HeisenbergXY: params = HeisenbergXYParams{num("epsilon")}; break;
        case Family::Froeschle: params = FroeschleParams{num("a"), num("b"), num("c")}; break;
        case Family::McMillan: params = McMillanParams{num("eta")}; break;
        case Family::RationalExample: params = RationalExampleParams{}; break;
    }
    try {
        ModelSpec model(std::move(params));
        if (auto it = s.find("reversed"); it != s.end() && p.boolean(it->second, "reversed")) {
            model = reverse(model);
        }
        return model;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        p.fail(fam_it->second.line, e.what());
    }
}

}  // namespace

std::vector<double> ResidualSection::grid() const {
    const int n = static_cast<int>(std::llround((z_max - z_min) / z_step)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back((z_min * (n - 1 - i) + z_max * i) / (n - 1));
    }
    return out;
}

std::vector<double> ContinueSection::path() const {
    if (!values.empty()) return values;
    std::vector<double> out;
    for (int i = 0; i < steps; ++i) {
        out.push_back((start * (steps - 1 - i) + stop * i) / (steps - 1));
    }
    return out;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    RunConfig cfg = parse_config_text(text.str(), path.string());
    // Stem defaults to the config file name when [output] does not set one.
    bool has_stem = false;
    for (const auto& line : cfg.echo) has_stem = has_stem || line.rfind("output.stem", 0) == 0;
    if (!has_stem) cfg.output.stem = path.stem().string();
    return cfg;
}

RunConfig parse_config_text(std::string_view text, std::string_view source) {
    Parser p(source);
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
    RunConfig cfg;

    std::string current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // ';' and '#' start a comment anywhere on the line
        std::string line = trim(std::string_view(raw).substr(0, raw.find_first_of(";#")));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') p.fail(line_no, "malformed section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!allowed_keys().count(current)) p.fail(line_no, "unknown section [" + current + "]");
            if (sections.count(current)) p.fail(line_no, "duplicate section [" + current + "]");
            sections[current];
            section_lines[current] = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) p.fail(line_no, "expected 'key = value'");
        if (current.empty()) p.fail(line_no, "key outside of any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!allowed_keys().at(current).count(key)) {
            p.fail(line_no, "unknown key '" + key + "' in [" + current + "]");
        }
        if (sections[current].count(key)) p.fail(line_no, "duplicate key '" + key + "'");
        sections[current][key] = Entry{value, line_no};
        cfg.echo.push_back(current + "." + key + " = " + value);
    }

    if (auto it = sections.find("model"); it != sections.end()) {
        cfg.model = build_model(p, it->second, section_lines["model"]);
    }
    if (auto it = sections.find("solve"); it != sections.end()) {
        const auto& s = it->second;
        if (auto e = s.find("order"); e != s.end()) cfg.solve.order = p.integer(e->second, "order");
        if (auto e = s.find("trialOrder"); e != s.end()) {
            cfg.solve.trial_order = p.integer(e->second, "trialOrder");
        }
        if (auto e = s.find("scale"); e != s.end()) {
            if (trim(e->second.value) == "auto") {
                cfg.solve.scale.reset();
            } else {
                cfg.solve.scale = p.number(e->second, "scale");
            }
        }
        if (auto e = s.find("branch"); e != s.end()) {
            if (trim(e->second.value) == "slow") {
                cfg.solve.branch = Branch::slow();
            } else {
                cfg.solve.branch = Branch::at(p.integer(e->second, "branch"));
            }
        }
        try {
            cfg.solve.validate();
        } catch (const Error& err) {
            p.fail(section_lines["solve"], err.what());
        }
    }
    if (auto it = sections.find("residual"); it != sections.end()) {
        const auto& s = it->second;
        ResidualSection r;
        if (auto e = s.find("zMin"); e != s.end()) r.z_min = p.number(e->second, "zMin");
        if (auto e = s.find("zMax"); e != s.end()) r.z_max = p.number(e->second, "zMax");
        if (auto e = s.find("zStep"); e != s.end()) r.z_step = p.number(e->second, "zStep");
        if (!(r.z_min < r.z_max)) p.fail(section_lines["residual"], "zMin must be below zMax");
        if (!(r.z_step > 0.0)) p.fail(section_lines["residual"], "zStep must be positive");
        cfg.residual = r;
    }
    if (auto it = sections.find("continue"); it != sections.end()) {
        const auto& s = it->second;
        ContinueSection c;
        const int line = section_lines["continue"];
        if (auto e = s.find("parameter"); e != s.end()) {
            c.parameter = trim(e->second.value);
        } else {
            p.fail(line, "[continue] needs a 'parameter' key");
        }
        if (auto e = s.find("values"); e != s.end()) {
            c.values = p.list(e->second, "values");
            c.steps = static_cast<int>(c.values.size());
        } else {
            for (const char* key : {"start", "stop", "steps"}) {
                if (!s.count(key)) p.fail(line, std::string("[continue] needs key '") + key + "'");
            }
            c.start = p.number(s.at("start"), "start");
            c.stop = p.number(s.at("stop"), "stop");
            c.steps = p.integer(s.at("steps"), "steps");
        }
        if (c.steps < 2) p.fail(line, "[continue] needs at least 2 steps");
        if (cfg.model) {
            const auto names = cfg.model->parameter_names();
            if (std::find(names.begin(), names.end(), c.parameter) == names.end()) {
                p.fail(line, "family " + std::string(family_name(cfg.model->family())) +
                                 " has no parameter '" + c.parameter + "'");
            }
        }
        cfg.cont = c;
    }
    if (auto it = sections.find("output"); it != sections.end()) {
        const auto& s = it->second;
        if (auto e = s.find("directory"); e != s.end()) cfg.output.directory = trim(e->second.value);
        if (auto e = s.find("stem"); e != s.end()) cfg.output.stem = trim(e->second.value);
    }
    return cfg;
}

}  // namespace invman::cli
