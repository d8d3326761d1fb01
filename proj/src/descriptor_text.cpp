#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/test_functions.hpp"

namespace heis {

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string point_text(const GroupPoint& p) {
    std::string s = "[";
    const auto c = p.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += num(c[i]);
    }
    return s + "]";
}

const char* shape_name(LatticeShape s) { return s == LatticeShape::Box ? "box" : "ball"; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Parsed argument value: number, vector, identifier or nested expression.
struct Value {
    enum Kind { Number, Vector, Word, Expr } kind = Number;
    double number = 0.0;
    std::vector<double> vec;
    std::string word;
    std::shared_ptr<TestFunction> expr;
};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    TestFunction parse_all() {
        TestFunction f = expression();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        return f;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("function descriptor: " + what + " at offset " + std::to_string(pos_) + " in '" +
                                    s_ + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string identifier() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }
    double number() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected number");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }
    bool looks_numeric() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return true;
        return s_.compare(pos_, 3, "inf") == 0 && (pos_ + 3 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 3])));
    }

    Value value() {
        Value v;
        skip();
        if (accept('[')) {
            v.kind = Value::Vector;
            if (!accept(']')) {
                do v.vec.push_back(number());
                while (accept(','));
                expect(']');
            }
            return v;
        }
        if (looks_numeric()) {
            v.kind = Value::Number;
            v.number = number();
            return v;
        }
        const std::size_t save = pos_;
        const std::string word = identifier();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            pos_ = save;
            v.kind = Value::Expr;
            v.expr = std::make_shared<TestFunction>(expression());
            return v;
        }
        v.kind = Value::Word;
        v.word = word;
        return v;
    }

    TestFunction expression() {
        const std::string name = identifier();
        expect('(');
        std::map<std::string, Value> kw;
        std::vector<TestFunction> positional;
        if (!accept(')')) {
            do {
                skip();
                const std::size_t save = pos_;
                const std::string word = identifier();
                if (accept('=')) {
                    if (kw.count(word)) fail("duplicate argument '" + word + "'");
                    kw[word] = value();
                } else {
                    pos_ = save;
                    positional.push_back(expression());
                }
            } while (accept(','));
            expect(')');
        }
        return build(name, kw, positional);
    }

    double take_number(std::map<std::string, Value>& kw, const std::string& key, std::optional<double> def = {}) {
        auto it = kw.find(key);
        if (it == kw.end()) {
            if (def) return *def;
            fail("missing argument '" + key + "'");
        }
        if (it->second.kind != Value::Number) fail("argument '" + key + "' must be a number");
        const double v = it->second.number;
        kw.erase(it);
        return v;
    }
    std::optional<GroupPoint> take_point(std::map<std::string, Value>& kw, const std::string& key) {
        auto it = kw.find(key);
        if (it == kw.end()) return std::nullopt;
        if (it->second.kind != Value::Vector) fail("argument '" + key + "' must be a vector");
        const auto v = it->second.vec;
        kw.erase(it);
        if (v.size() < 3 || v.size() % 2 == 0) fail("point vectors need 2n+1 coordinates");
        return GroupPoint(std::vector<double>(v.begin(), v.end() - 1), v.back());
    }
    TestFunction take_expr(std::map<std::string, Value>& kw, const std::string& key) {
        auto it = kw.find(key);
        if (it == kw.end()) fail("missing argument '" + key + "'");
        if (it->second.kind != Value::Expr) fail("argument '" + key + "' must be a function");
        TestFunction f = *it->second.expr;
        kw.erase(it);
        return f;
    }
    int take_n(std::map<std::string, Value>& kw) {
        const double v = take_number(kw, "n", 1.0);
        if (v != std::floor(v)) fail("n must be an integer");
        return static_cast<int>(v);
    }

    TestFunction build(const std::string& name, std::map<std::string, Value>& kw, std::vector<TestFunction>& pos) {
        TestFunction out;
        if (name != "sum" && !pos.empty()) fail("'" + name + "' takes only keyword arguments");
        if (name == "zero") {
            out = fn::zero();
        } else if (name == "ball") {
            auto c = take_point(kw, "center");
            const int n = c ? c->n() : take_n(kw);
            out = fn::ball(c ? *c : GroupPoint(n), take_number(kw, "radius"));
        } else if (name == "cube") {
            auto c = take_point(kw, "corner");
            const int n = c ? c->n() : take_n(kw);
            out = fn::cube(c ? *c : GroupPoint(n), take_number(kw, "side"));
        } else if (name == "power") {
            const double s = take_number(kw, "s");
            std::optional<TestFunction> support;
            if (kw.count("support")) support = take_expr(kw, "support");
            out = fn::power(s, support);
        } else if (name == "logtail") {
            const double p = take_number(kw, "power");
            const double tau = take_number(kw, "tau");
            const double cutoff = take_number(kw, "cutoff", 16.0);
            out = fn::logtail(p, tau, cutoff, take_number(kw, "outer", kInf));
        } else if (name == "lattice") {
            LatticeSumSpec spec;
            spec.n = take_n(kw);
            auto it = kw.find("shape");
            if (it == kw.end() || it->second.kind != Value::Word) fail("lattice needs shape=box|ball");
            if (it->second.word == "box")
                spec.shape = LatticeShape::Box;
            else if (it->second.word == "ball")
                spec.shape = LatticeShape::Ball;
            else
                fail("unknown lattice shape '" + it->second.word + "'");
            kw.erase(it);
            spec.decay = take_number(kw, "decay");
            spec.weight_power = take_number(kw, "weight", 0.0);
            spec.log_power = take_number(kw, "log", 0.0);
            spec.min_norm = take_number(kw, "min_norm", 0.0);
            spec.truncation = take_number(kw, "truncation");
            out = fn::lattice(spec);
        } else if (name == "scale") {
            const double c = take_number(kw, "c");
            out = fn::scale(c, take_expr(kw, "of"));
        } else if (name == "dilate") {
            const double s = take_number(kw, "s");
            out = fn::dilate(s, take_expr(kw, "of"));
        } else if (name == "sum") {
            out = fn::sum(pos);
        } else {
            fail("unknown function '" + name + "'");
        }
        if (!kw.empty()) fail("unknown argument '" + kw.begin()->first + "' for '" + name + "'");
        return out;
    }
};

}  // namespace

std::string to_text(const TestFunction& f) {
    return std::visit(
        overloaded{
            [](const ZeroFn&) -> std::string { return "zero()"; },
            [](const IndicatorBall& b) { return "ball(center=" + point_text(b.center) + ", radius=" + num(b.radius) + ")"; },
            [](const IndicatorCube& c) { return "cube(corner=" + point_text(c.corner) + ", side=" + num(c.side) + ")"; },
            [](const PowerWeight& w) {
                std::string s = "power(s=" + num(w.s);
                if (w.support) s += ", support=" + to_text(*w.support);
                return s + ")";
            },
            [](const LogPowerTail& l) {
                return "logtail(power=" + num(l.power) + ", tau=" + num(l.tau) + ", cutoff=" + num(l.cutoff) +
                       ", outer=" + num(l.outer) + ")";
            },
            [](const LatticeSum& s) {
                const auto& p = s.spec;
                return "lattice(n=" + std::to_string(p.n) + ", shape=" + shape_name(p.shape) + ", decay=" + num(p.decay) +
                       ", weight=" + num(p.weight_power) + ", log=" + num(p.log_power) + ", min_norm=" + num(p.min_norm) +
                       ", truncation=" + num(p.truncation) + ")";
            },
            [](const Scale& s) { return "scale(c=" + num(s.c) + ", of=" + to_text(s.inner) + ")"; },
            [](const Dilate& d) { return "dilate(s=" + num(d.s) + ", of=" + to_text(d.inner) + ")"; },
            [](const Sum& s) {
                std::string out = "sum(";
                for (std::size_t i = 0; i < s.items.size(); ++i) {
                    if (i) out += ", ";
                    out += to_text(s.items[i]);
                }
                return out + ")";
            },
        },
        f.node().v);
}

TestFunction parse_function(const std::string& text) { return Parser(text).parse_all(); }

}  // namespace heis
