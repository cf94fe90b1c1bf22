#include "runsec/formula.hpp"
#include "runsec/kernel.hpp"

#include <cctype>
#include <vector>

namespace runsec {

namespace {

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

std::string cmp_text(Cmp c) {
    switch (c) {
    case Cmp::eq: return "=";
    case Cmp::le: return "<=";
    case Cmp::lt: return "<";
    case Cmp::ge: return ">=";
    case Cmp::gt: return ">";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    FormulaPtr parse() {
        auto f = formula();
        skip();
        if (pos_ != s_.size())
            fail("trailing input");
        return f;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw Error("formula parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c))
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string atom() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')')
            ++pos_;
        if (start == pos_)
            fail("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    FormulaPtr formula() {
        if (!peek('('))
            return prim(atom());
        ++pos_;
        auto op = atom();
        FormulaPtr out;
        if (op == "not") {
            out = neg(formula());
        } else if (op == "and" || op == "or") {
            out = formula();
            do
                out = op == "and" ? conj(out, formula()) : disj(out, formula());
            while (!peek(')'));
        } else if (op == "K" || op == "P") {
            auto agent = atom();
            auto f = formula();
            out = op == "K" ? knows(agent, f) : possible(agent, f);
        } else if (op == "once") {
            out = once(formula());
        } else if (op == "pr") {
            auto agent = atom();
            auto f = formula();
            auto c = atom();
            Cmp cmp;
            if (c == "=")
                cmp = Cmp::eq;
            else if (c == "<=")
                cmp = Cmp::le;
            else if (c == "<")
                cmp = Cmp::lt;
            else if (c == ">=")
                cmp = Cmp::ge;
            else if (c == ">")
                cmp = Cmp::gt;
            else
                fail("unknown comparison '" + c + "'");
            Rational q;
            try {
                q = parse_rational(atom());
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            out = pr(agent, f, cmp, q);
        } else {
            fail("unknown operator '" + op + "'");
        }
        expect(')');
        return out;
    }
};

} // namespace

FormulaPtr prim(std::string name) { return node({Formula::Kind::prim, std::move(name), nullptr, nullptr, Cmp::eq, 0}); }
FormulaPtr neg(FormulaPtr f) { return node({Formula::Kind::negation, {}, std::move(f), nullptr, Cmp::eq, 0}); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    return node({Formula::Kind::conjunction, {}, std::move(a), std::move(b), Cmp::eq, 0});
}
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }
FormulaPtr knows(std::string agent, FormulaPtr f) {
    return node({Formula::Kind::knows, std::move(agent), std::move(f), nullptr, Cmp::eq, 0});
}
FormulaPtr possible(std::string agent, FormulaPtr f) {
    return node({Formula::Kind::possible, std::move(agent), std::move(f), nullptr, Cmp::eq, 0});
}
FormulaPtr once(FormulaPtr f) { return node({Formula::Kind::once, {}, std::move(f), nullptr, Cmp::eq, 0}); }
FormulaPtr pr(std::string agent, FormulaPtr f, Cmp cmp, Rational q) {
    if (q < 0 || q > 1)
        throw Error("probability bound " + to_string(q) + " outside [0,1]");
    return node({Formula::Kind::pr, std::move(agent), std::move(f), nullptr, cmp, std::move(q)});
}

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::prim: return f.name;
    case Formula::Kind::negation: return "(not " + to_string(*f.left) + ")";
    case Formula::Kind::conjunction: return "(and " + to_string(*f.left) + " " + to_string(*f.right) + ")";
    case Formula::Kind::knows: return "(K " + f.name + " " + to_string(*f.left) + ")";
    case Formula::Kind::possible: return "(P " + f.name + " " + to_string(*f.left) + ")";
    case Formula::Kind::once: return "(once " + to_string(*f.left) + ")";
    case Formula::Kind::pr:
        return "(pr " + f.name + " " + to_string(*f.left) + " " + cmp_text(f.cmp) + " " + to_string(f.bound) + ")";
    }
    return "?";
}

bool compare(const Rational& lhs, Cmp cmp, const Rational& rhs) {
    switch (cmp) {
    case Cmp::eq: return lhs == rhs;
    case Cmp::le: return lhs <= rhs;
    case Cmp::lt: return lhs < rhs;
    case Cmp::ge: return lhs >= rhs;
    case Cmp::gt: return lhs > rhs;
    }
    return false;
}

} // namespace runsec
