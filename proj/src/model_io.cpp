#include "molfate/model_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "molfate/error.hpp"

namespace molfate {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
    return s;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    const auto first = static_cast<unsigned char>(s.front());
    if (!std::isalpha(first) && first != '_') return false;
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        if (!std::isalnum(u) && c != '_' && c != '*' && c != '~' && c != '\'') return false;
    }
    return true;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto r = Rational::parse(s);
        if (!r) return std::nullopt;
        return r->to_double();
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Line {
    std::size_t number;
    bool indented;
    std::string text;
};

class Parser {
public:
    explicit Parser(std::string_view text) { split_lines(text); }

    Model parse() {
        std::string section;
        for (const Line& line : lines_) {
            if (!line.indented) {
                auto colon = line.text.find(':');
                if (colon == std::string::npos) throw ParseError(line.number, "expected 'key:'");
                const std::string key(trim(std::string_view(line.text).substr(0, colon)));
                const std::string_view rest = trim(std::string_view(line.text).substr(colon + 1));
                section = key;
                open_section(line.number, key, rest);
                continue;
            }
            if (section == "reactions")
                parse_reaction(line);
            else if (section == "statuses")
                parse_status(line);
            else if (section == "transforms")
                parse_transform(line);
            else if (section == "initial")
                parse_initial(line);
            else
                throw ParseError(line.number, "unexpected indented line");
        }
        if (!have_species_) throw ParseError(last_line_, "missing 'species:'");

        Model model;
        model.name = name_;
        model.network = ReactionNetwork(species_, reactions_);
        if (have_statuses_) model.schema = StatusSchema(statuses_, transforms_);
        model.initial.assign(species_.size(), 0.0);
        for (const auto& [s, v] : initial_) model.initial[s] = v;
        return model;
    }

private:
    void split_lines(std::string_view text) {
        std::string normalized = replace_all(std::string(text), "\xE2\x86\x92", "->");  // U+2192
        normalized = replace_all(normalized, "\xCE\x94", "Delta");                      // U+0394
        normalized = replace_all(normalized, "\xE2\x88\x85", "0");                      // U+2205
        std::istringstream in(normalized);
        std::string raw;
        std::size_t number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            std::string_view content = trim(raw);
            if (content.empty()) continue;
            const bool indented = std::isspace(static_cast<unsigned char>(raw.front()));
            lines_.push_back({number, indented, std::string(content)});
        }
        last_line_ = number;
    }

    void open_section(std::size_t ln, const std::string& key, std::string_view rest) {
        if (key == "model") {
            name_ = std::string(rest);
        } else if (key == "species") {
            if (have_species_) throw ParseError(ln, "duplicate 'species:'");
            for (auto name : split(rest, ',')) {
                if (!is_identifier(name)) throw ParseError(ln, "invalid species name '" + std::string(name) + "'");
                species_.emplace_back(name);
            }
            have_species_ = true;
        } else if (key == "reactions") {
            require_species(ln);
            expect_empty(ln, rest);
        } else if (key == "statuses") {
            require_species(ln);
            expect_empty(ln, rest);
            have_statuses_ = true;
        } else if (key == "transforms") {
            if (!have_statuses_) throw ParseError(ln, "'transforms:' must follow 'statuses:'");
            expect_empty(ln, rest);
        } else if (key == "initial") {
            require_species(ln);
            expect_empty(ln, rest);
        } else {
            throw ParseError(ln, "unknown key '" + key + "'");
        }
    }

    void require_species(std::size_t ln) const {
        if (!have_species_) throw ParseError(ln, "'species:' must come first");
    }
    static void expect_empty(std::size_t ln, std::string_view rest) {
        if (!rest.empty()) throw ParseError(ln, "unexpected text after section header");
    }

    SpeciesIndex species(std::size_t ln, std::string_view name) const {
        for (std::size_t i = 0; i < species_.size(); ++i)
            if (species_[i] == name) return i;
        throw ParseError(ln, "unknown species '" + std::string(name) + "'");
    }

    StatusId status(std::size_t ln, std::string_view name) const {
        if (name == "Delta") return kCemetery;
        for (std::size_t i = 0; i < statuses_.size(); ++i)
            if (statuses_[i].name == name) return static_cast<StatusId>(i);
        throw ParseError(ln, "unknown status '" + std::string(name) + "'");
    }

    Complex complex(std::size_t ln, std::string_view text) const {
        text = trim(text);
        if (text.empty()) throw ParseError(ln, "empty complex (write 0)");
        std::map<SpeciesIndex, int> coeffs;
        if (text == "0") return Complex(coeffs);
        for (auto term : split(text, '+')) {
            std::size_t i = 0;
            while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
            int count = 1;
            if (i > 0) {
                auto [ptr, ec] = std::from_chars(term.data(), term.data() + i, count);
                if (ec != std::errc{} || count <= 0) throw ParseError(ln, "bad coefficient in '" + std::string(term) + "'");
            }
            const std::string_view name = trim(term.substr(i));
            if (!is_identifier(name)) throw ParseError(ln, "bad term '" + std::string(term) + "'");
            coeffs[species(ln, name)] += count;
        }
        return Complex(coeffs);
    }

    // "[label:] lhs -> rhs @ value"; returns {label, lhs, rhs, value}.
    struct Arrow {
        std::string label;
        std::string_view lhs, rhs, value;
    };
    static Arrow arrow(const Line& line, bool label_required) {
        std::string_view text = line.text;
        Arrow out;
        const auto arrow_pos = text.find("->");
        if (arrow_pos == std::string_view::npos) throw ParseError(line.number, "missing '->'");
        if (auto colon = text.find(':'); colon != std::string_view::npos && colon < arrow_pos) {
            out.label = std::string(trim(text.substr(0, colon)));
            if (!is_identifier(out.label)) throw ParseError(line.number, "invalid label '" + out.label + "'");
            out.lhs = text.substr(colon + 1, arrow_pos - colon - 1);
        } else {
            if (label_required) throw ParseError(line.number, "missing reaction label");
            out.lhs = text.substr(0, arrow_pos);
        }
        const std::string_view after = text.substr(arrow_pos + 2);
        const auto at = after.find('@');
        if (at == std::string_view::npos) throw ParseError(line.number, "missing '@ value'");
        out.rhs = trim(after.substr(0, at));
        out.value = trim(after.substr(at + 1));
        out.lhs = trim(out.lhs);
        return out;
    }

    void parse_reaction(const Line& line) {
        Arrow a = arrow(line, false);
        Reaction rx;
        rx.label = a.label.empty() ? "r" + std::to_string(reactions_.size() + 1) : a.label;
        for (const auto& other : reactions_)
            if (other.label == rx.label) throw ParseError(line.number, "duplicate reaction label '" + rx.label + "'");
        rx.reactant = complex(line.number, a.lhs);
        rx.product = complex(line.number, a.rhs);
        auto k = parse_number(a.value);
        if (!k) throw ParseError(line.number, "bad rate constant '" + std::string(a.value) + "'");
        rx.rate_constant = *k;
        reactions_.push_back(std::move(rx));
    }

    void parse_status(const Line& line) {
        std::string_view text = line.text;
        bool initial = false;
        if (auto paren = text.find('('); paren != std::string_view::npos) {
            if (trim(text.substr(paren)) != "(initial)") throw ParseError(line.number, "expected '(initial)'");
            initial = true;
            text = trim(text.substr(0, paren));
        }
        auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError(line.number, "expected 'Status = Species'");
        const std::string_view name = trim(text.substr(0, eq));
        if (!is_identifier(name) || name == "Delta")
            throw ParseError(line.number, "invalid status name '" + std::string(name) + "'");
        for (const auto& st : statuses_)
            if (st.name == name) throw ParseError(line.number, "duplicate status '" + std::string(name) + "'");
        statuses_.push_back({std::string(name), species(line.number, trim(text.substr(eq + 1))), initial});
    }

    void parse_transform(const Line& line) {
        Arrow a = arrow(line, true);
        std::optional<std::size_t> r;
        for (std::size_t i = 0; i < reactions_.size(); ++i)
            if (reactions_[i].label == a.label) r = i;
        if (!r) throw ParseError(line.number, "unknown reaction '" + a.label + "'");
        Transform t;
        t.reaction = *r;
        t.from = status(line.number, a.lhs);
        if (t.from == kCemetery) throw ParseError(line.number, "Delta cannot be a source status");
        t.to = status(line.number, a.rhs);
        t.exact = Rational::parse(a.value);
        if (t.exact) {
            t.probability = t.exact->to_double();
        } else {
            auto p = parse_number(a.value);
            if (!p) throw ParseError(line.number, "bad probability '" + std::string(a.value) + "'");
            t.probability = *p;
        }
        transforms_.push_back(t);
    }

    void parse_initial(const Line& line) {
        auto eq = line.text.find('=');
        if (eq == std::string::npos) throw ParseError(line.number, "expected 'Species = value'");
        const std::string_view text = line.text;
        const SpeciesIndex s = species(line.number, trim(text.substr(0, eq)));
        auto v = parse_number(text.substr(eq + 1));
        if (!v || *v < 0.0) throw ParseError(line.number, "bad initial concentration");
        initial_[s] = *v;
    }

    std::vector<Line> lines_;
    std::size_t last_line_ = 0;
    std::string name_;
    bool have_species_ = false;
    bool have_statuses_ = false;
    std::vector<std::string> species_;
    std::vector<Reaction> reactions_;
    std::vector<Status> statuses_;
    std::vector<Transform> transforms_;
    std::map<SpeciesIndex, double> initial_;
};

std::string format_complex(const ReactionNetwork& net, const Complex& y) {
    if (y.empty()) return "0";
    std::string out;
    for (const auto& t : y.terms()) {
        if (!out.empty()) out += " + ";
        if (t.count != 1) out += std::to_string(t.count) + " ";
        out += net.species()[t.species];
    }
    return out;
}

// Inexact probabilities are written in exponent form so that re-parsing does
// not promote them to exact rationals.
std::string format_scientific(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    return std::string(buf, ptr);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Model parse_model(std::string_view text, bool validate) {
    Model model = Parser(text).parse();
    if (validate) {
        auto violations = validate_network(model.network);
        if (model.schema) {
            auto more = validate_schema(model.network, *model.schema);
            violations.insert(violations.end(), more.begin(), more.end());
        }
        if (!violations.empty()) {
            std::string msg = "invalid model:";
            for (const auto& v : violations) msg += "\n  " + v;
            throw ModelError(msg);
        }
    }
    return model;
}

Model load_model(const std::filesystem::path& path, bool validate) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), validate);
}

std::string serialize_model(const Model& model) {
    const ReactionNetwork& net = model.network;
    std::ostringstream out;
    if (!model.name.empty()) out << "model: " << model.name << "\n";
    out << "species: ";
    for (std::size_t i = 0; i < net.dimension(); ++i) out << (i ? ", " : "") << net.species()[i];
    out << "\nreactions:\n";
    for (const auto& rx : net.reactions())
        out << "  " << rx.label << ": " << format_complex(net, rx.reactant) << " -> "
            << format_complex(net, rx.product) << " @ " << format_double(rx.rate_constant) << "\n";
    if (model.schema) {
        const StatusSchema& schema = *model.schema;
        out << "statuses:\n";
        for (const auto& st : schema.statuses())
            out << "  " << st.name << " = " << net.species()[st.species] << (st.initial ? " (initial)" : "") << "\n";
        out << "transforms:\n";
        for (const auto& t : schema.transforms()) {
            out << "  " << net.reactions()[t.reaction].label << ": " << schema.status_name(t.from) << " -> "
                << schema.status_name(t.to) << " @ "
                << (t.exact ? t.exact->to_string() : format_scientific(t.probability)) << "\n";
        }
    }
    bool any_initial = false;
    for (double v : model.initial) any_initial = any_initial || v != 0.0;
    if (any_initial) {
        out << "initial:\n";
        for (std::size_t i = 0; i < model.initial.size(); ++i)
            if (model.initial[i] != 0.0) out << "  " << net.species()[i] << " = " << format_double(model.initial[i]) << "\n";
    }
    return out.str();
}

}  // namespace molfate
