#include "pwbddc/expression.hpp"

#include "pwbddc/types.hpp"

#include <cctype>
#include <cmath>

namespace pwbddc {

namespace {

class Parser {
public:
    Parser(const std::string& text, const std::map<std::string, double>& vars) : s_(text), vars_(vars) {}

    double parse()
    {
        const double v = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw ConfigError("cannot parse expression '" + s_ + "': " + why);
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(char c)
    {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    bool starts_factor()
    {
        skip();
        if (i_ >= s_.size()) return false;
        const char c = s_[i_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.';
    }

    double sum()
    {
        double v = product();
        for (;;) {
            if (eat('+'))
                v += product();
            else if (eat('-'))
                v -= product();
            else
                return v;
        }
    }

    double product()
    {
        double v = unary();
        for (;;) {
            if (eat('*'))
                v *= unary();
            else if (eat('/'))
                v /= unary();
            else if (starts_factor())
                v *= power();
            else
                return v;
        }
    }

    double unary()
    {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    double power()
    {
        const double base = atom();
        if (eat('^')) return std::pow(base, unary());
        return base;
    }

    double atom()
    {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            const double v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        const char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(i_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            i_ += used;
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
            std::string name = s_.substr(i_, j - i_);
            i_ = j;
            if (name == "log" || name == "ln" || name == "exp" || name == "sqrt") {
                if (!eat('(')) fail(name + " needs parentheses");
                const double arg = sum();
                if (!eat(')')) fail("missing ')'");
                if (name == "exp") return std::exp(arg);
                if (name == "sqrt") return std::sqrt(arg);
                if (!(arg > 0.0)) fail("log of a non-positive value");
                return std::log(arg);
            }
            if (name == "pi") return M_PI;
            auto it = vars_.find(name);
            if (it == vars_.end()) fail("unknown name '" + name + "'");
            return it->second;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    const std::map<std::string, double>& vars_;
    std::size_t i_ = 0;
};

} // namespace

double evaluate_expression(const std::string& text, const std::map<std::string, double>& variables)
{
    if (text.find_first_not_of(" \t") == std::string::npos) throw ConfigError("empty expression");
    return Parser(text, variables).parse();
}

} // namespace pwbddc
