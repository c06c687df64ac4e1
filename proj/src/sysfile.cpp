#include "mroot/sysfile.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mroot {

namespace {

enum class Tok { num, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    double value = 0.0;
    std::string text;
    int column = 0;
};

class Lexer {
  public:
    Lexer(const std::string& s, int line, int column_offset = 0)
        : s_(s), line_(line), offset_(column_offset) {
        advance();
    }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, line_, at.column);
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_.column = offset_ + static_cast<int>(pos_) + 1;
        tok_.text.clear();
        if (pos_ >= s_.size()) {
            tok_.kind = Tok::end;
            return;
        }
        const char c = s_[pos_];
        switch (c) {
            case '+': tok_.kind = Tok::plus; ++pos_; return;
            case '-': tok_.kind = Tok::minus; ++pos_; return;
            case '*': tok_.kind = Tok::star; ++pos_; return;
            case '/': tok_.kind = Tok::slash; ++pos_; return;
            case '^': tok_.kind = Tok::caret; ++pos_; return;
            case '(': tok_.kind = Tok::lparen; ++pos_; return;
            case ')': tok_.kind = Tok::rparen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '.') {
                ++pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
                size_t mark = pos_;
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                } else {
                    pos_ = mark; // the e was an identifier, not an exponent
                }
            }
            tok_.kind = Tok::num;
            tok_.text = s_.substr(start, pos_ - start);
            if (tok_.text == ".") throw ParseError("malformed number", line_, tok_.column);
            tok_.value = std::stod(tok_.text);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            tok_.kind = Tok::ident;
            tok_.text = s_.substr(start, pos_ - start);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, tok_.column);
    }

    const std::string& s_;
    int line_;
    int offset_ = 0;
    size_t pos_ = 0;
    Token tok_;
};

class ExprParser {
  public:
    ExprParser(Lexer& lex, const std::vector<std::string>& vars) : lex_(lex), vars_(vars) {}

    Poly parse() {
        Poly p = expr();
        if (lex_.peek().kind != Tok::end) lex_.fail("unexpected trailing input", lex_.peek());
        return p;
    }

  private:
    int nvars() const { return static_cast<int>(vars_.size()); }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (lex_.peek().kind == Tok::plus) {
                lex_.take();
                acc = acc + term();
            } else if (lex_.peek().kind == Tok::minus) {
                lex_.take();
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    Poly term() {
        Poly acc = factor();
        for (;;) {
            if (lex_.peek().kind == Tok::star) {
                lex_.take();
                acc = acc * factor();
            } else if (lex_.peek().kind == Tok::slash) {
                const Token slash = lex_.take();
                Poly rhs = factor();
                if (rhs.degree() > 0)
                    lex_.fail("division is only supported by a numeric literal", slash);
                const cd d = rhs.coeff(Monomial::unit(nvars()));
                if (d == cd(0.0)) lex_.fail("division by zero", slash);
                acc = acc.scaled(cd(1.0) / d);
            } else {
                return acc;
            }
        }
    }

    Poly factor() {
        Poly base = atom();
        while (lex_.peek().kind == Tok::caret) {
            const Token caret = lex_.take();
            const Token e = lex_.peek();
            if (e.kind != Tok::num) lex_.fail("expected a nonnegative integer exponent", caret);
            const double v = e.value;
            if (v < 0.0 || v != std::floor(v) || e.text.find('.') != std::string::npos ||
                e.text.find('e') != std::string::npos || e.text.find('E') != std::string::npos)
                lex_.fail("exponent must be a nonnegative integer", e);
            lex_.take();
            const int p = static_cast<int>(v);
            Poly acc = Poly::constant(nvars(), 1.0);
            for (int i = 0; i < p; ++i) acc = acc * base;
            base = acc;
        }
        return base;
    }

    Poly atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::num:
                lex_.take();
                return Poly::constant(nvars(), t.value);
            case Tok::minus:
                lex_.take();
                return atom().scaled(-1.0);
            case Tok::plus:
                lex_.take();
                return atom();
            case Tok::lparen: {
                lex_.take();
                Poly p = expr();
                if (lex_.peek().kind != Tok::rparen) lex_.fail("expected ')'", lex_.peek());
                lex_.take();
                return p;
            }
            case Tok::ident: {
                lex_.take();
                if (t.text == "i") return Poly::constant(nvars(), cd(0.0, 1.0));
                for (int v = 0; v < nvars(); ++v)
                    if (vars_[v] == t.text) return Poly::variable(nvars(), v);
                lex_.fail("unknown variable '" + t.text + "'", t);
            }
            default:
                lex_.fail("expected a term", t);
        }
    }

    Lexer& lex_;
    const std::vector<std::string>& vars_;
};

Poly parse_expression(const std::string& text, int line, const std::vector<std::string>& vars,
                      int column_offset = 0) {
    Lexer lex(text, line, column_offset);
    ExprParser parser(lex, vars);
    return parser.parse();
}

std::vector<cd> parse_number_list(const std::string& text, int line,
                                  const std::vector<std::string>& vars) {
    std::vector<cd> out;
    std::string chunk;
    std::istringstream in(text);
    while (std::getline(in, chunk, ',')) {
        const Poly p = parse_expression(chunk, line, vars);
        if (p.degree() > 0) throw ParseError("expected a numeric entry", line, 1);
        out.push_back(p.coeff(Monomial::unit(static_cast<int>(vars.size()))));
    }
    if (out.empty()) throw ParseError("expected at least one numeric entry", line, 1);
    return out;
}

} // namespace

SystemFile parse_system(const std::string& text) {
    SystemFile out;
    std::vector<Poly> polys;
    std::vector<std::string> poly_lines;
    std::vector<int> poly_line_numbers;
    std::vector<int> poly_columns;
    std::optional<std::vector<cd>> root, guess;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("expected 'key: value'", line_no, static_cast<int>(first) + 1);
        std::string key = line.substr(first, colon - first);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
        const std::string value = line.substr(colon + 1);

        if (key == "vars") {
            if (!out.variables.empty()) throw ParseError("duplicate vars line", line_no, 1);
            std::istringstream vs(value);
            std::string name;
            while (std::getline(vs, name, ',')) {
                const size_t a = name.find_first_not_of(" \t");
                const size_t b = name.find_last_not_of(" \t");
                if (a == std::string::npos) throw ParseError("empty variable name", line_no, 1);
                name = name.substr(a, b - a + 1);
                for (char c : name)
                    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                        throw ParseError("invalid variable name '" + name + "'", line_no, 1);
                if (std::isdigit(static_cast<unsigned char>(name[0])))
                    throw ParseError("invalid variable name '" + name + "'", line_no, 1);
                if (name == "i")
                    throw ParseError("'i' is reserved for the imaginary unit", line_no, 1);
                out.variables.push_back(name);
            }
            if (out.variables.empty()) throw ParseError("vars line declares nothing", line_no, 1);
        } else if (key == "poly") {
            if (out.variables.empty()) throw ParseError("poly before vars", line_no, 1);
            poly_lines.push_back(value);
            poly_line_numbers.push_back(line_no);
            poly_columns.push_back(static_cast<int>(colon) + 1);
        } else if (key == "root") {
            root = parse_number_list(value, line_no, out.variables);
        } else if (key == "guess") {
            guess = parse_number_list(value, line_no, out.variables);
        } else if (key == "mu") {
            try {
                out.expected_mu = std::stoi(value);
            } catch (const std::exception&) {
                throw ParseError("mu expects an integer", line_no, 1);
            }
        } else if (key == "tau") {
            try {
                out.recommended_tau = std::stod(value);
            } catch (const std::exception&) {
                throw ParseError("tau expects a number", line_no, 1);
            }
            if (*out.recommended_tau <= 0.0 || *out.recommended_tau >= 1.0)
                throw ParseError("tau must lie in (0, 1)", line_no, 1);
        } else {
            throw ParseError("unknown key '" + key + "'", line_no, 1);
        }
    }

    if (out.variables.empty()) throw ParseError("missing vars line", line_no, 1);
    for (size_t i = 0; i < poly_lines.size(); ++i)
        polys.push_back(
            parse_expression(poly_lines[i], poly_line_numbers[i], out.variables, poly_columns[i]));
    if (polys.size() < out.variables.size())
        throw ParseError("need at least as many polynomials as variables", line_no, 1);
    out.system = PolySystem(std::move(polys), static_cast<int>(out.variables.size()));

    const int s = static_cast<int>(out.variables.size());
    if (root) {
        if (static_cast<int>(root->size()) != s)
            throw ParseError("root has wrong dimension", line_no, 1);
        out.known_root = Point(std::move(*root));
    }
    if (guess) {
        if (static_cast<int>(guess->size()) != s)
            throw ParseError("guess has wrong dimension", line_no, 1);
        out.initial_guess = Point(std::move(*guess));
    }
    return out;
}

SystemFile load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

namespace {

std::string format_exact(cd z) {
    char buf[96];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", z.real());
        return buf;
    }
    if (z.real() == 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g*i", z.imag());
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g %c %.17g*i", z.real(), z.imag() < 0 ? '-' : '+',
                  std::abs(z.imag()));
    return buf;
}

} // namespace

std::string print_system(const SystemFile& f) {
    std::ostringstream out;
    out << "vars: ";
    for (size_t i = 0; i < f.variables.size(); ++i) {
        if (i) out << ", ";
        out << f.variables[i];
    }
    out << "\n";
    for (const Poly& p : f.system.polys()) out << "poly: " << p.to_string(f.variables) << "\n";
    auto write_point = [&](const char* key, const Point& pt) {
        out << key << ": ";
        for (int i = 0; i < pt.size(); ++i) {
            if (i) out << ", ";
            out << format_exact(pt.coords[i]);
        }
        out << "\n";
    };
    if (f.known_root) write_point("root", *f.known_root);
    if (f.initial_guess) write_point("guess", *f.initial_guess);
    if (f.expected_mu) out << "mu: " << *f.expected_mu << "\n";
    if (f.recommended_tau) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", *f.recommended_tau);
        out << "tau: " << buf << "\n";
    }
    return out.str();
}

std::string format_complex(cd z) {
    char buf[96];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof(buf), "%.15g", z.real());
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.15g%+.15gi", z.real(), z.imag());
    return buf;
}

} // namespace mroot
