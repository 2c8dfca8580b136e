#include "collage/clg_format.hpp"

#include <cctype>
#include <sstream>

namespace collage {

namespace {

// Single-line token scanner for the .clg grammar.
class LineScanner {
public:
    LineScanner(const std::string& line, int lineno) : line_(line), lineno_(lineno) {}

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(lineno_, static_cast<int>(pos_) + 1, msg);
    }

    void expect(const std::string& tok) {
        skip_ws();
        if (line_.compare(pos_, tok.size(), tok) != 0) fail("expected '" + tok + "'");
        pos_ += tok.size();
    }

    bool try_consume(const std::string& tok) {
        skip_ws();
        if (line_.compare(pos_, tok.size(), tok) != 0) return false;
        pos_ += tok.size();
        return true;
    }

    int nonterminal_id() {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != 'X') fail("expected nonterminal 'X<id>'");
        ++pos_;
        return static_cast<int>(decimal().get_si());
    }

    BigInt decimal() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected a decimal number");
        return BigInt(line_.substr(start, pos_ - start));
    }

    char quoted_char() {
        skip_ws();
        if (pos_ + 2 >= line_.size() + 1 || line_[pos_] != '\'') fail("expected quoted terminal");
        if (pos_ + 2 >= line_.size() || line_[pos_ + 2] != '\'')
            fail("terminal must be a single quoted character");
        char c = line_[pos_ + 1];
        pos_ += 3;
        return c;
    }

private:
    const std::string& line_;
    size_t pos_ = 0;
    int lineno_;
};

}  // namespace

CollageSystem parse_system(const std::string& text) {
    CollageSystem g;
    bool saw_start = false;
    int start_id = 0;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip trailing CR and comments
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);

        LineScanner sc(line, lineno);
        if (sc.at_end()) continue;

        if (sc.try_consume("start")) {
            int id = sc.nonterminal_id();
            if (!sc.at_end()) sc.fail("trailing tokens after start directive");
            saw_start = true;
            start_id = id;
            continue;
        }

        int id = sc.nonterminal_id();
        int next = g.size() + 1;
        if (id < next) throw ParseError(lineno, 1, "duplicate id X" + std::to_string(id));
        if (id > next)
            throw ParseError(lineno, 1, "ids must be sequential; expected X" + std::to_string(next));
        sc.expect("->");

        if (sc.try_consume("'")) {
            // re-scan the quote as part of the terminal
            Rule r = Rule::atomic(0);
            LineScanner sc2(line, lineno);
            sc2.nonterminal_id();
            sc2.expect("->");
            r.atom = sc2.quoted_char();
            if (!sc2.at_end()) sc2.fail("trailing tokens");
            g.rules.push_back(r);
            continue;
        }

        int y = sc.nonterminal_id();
        if (y >= id) throw ParseError(lineno, 1, "forward reference to X" + std::to_string(y));
        if (sc.try_consume("^")) {
            BigInt r = sc.decimal();
            if (r == 2)
                sc.fail("repeat count 2 is not allowed; write the concatenation X" +
                        std::to_string(y) + " X" + std::to_string(y) + " instead");
            if (r < 3) sc.fail("repeat count must be at least 3");
            if (!sc.at_end()) sc.fail("trailing tokens");
            g.rules.push_back(Rule::repetition(y, r));
        } else if (sc.try_consume("[")) {
            BigInt b = sc.decimal();
            sc.expect("..");
            BigInt e = sc.decimal();
            sc.expect(")");
            if (!sc.at_end()) sc.fail("trailing tokens");
            if (!(b >= 1 && b < e)) sc.fail("truncation interval must satisfy 1 <= b < e");
            g.rules.push_back(Rule::truncation(y, b, e));
        } else {
            int z = sc.nonterminal_id();
            if (z >= id) throw ParseError(lineno, 1, "forward reference to X" + std::to_string(z));
            if (!sc.at_end()) sc.fail("trailing tokens");
            g.rules.push_back(Rule::concat(y, z));
        }
    }

    if (g.rules.empty()) throw ParseError(lineno + 1, 1, "no rules");
    if (saw_start) {
        if (start_id < 1 || start_id > g.size())
            throw ParseError(lineno, 1, "start refers to unknown nonterminal X" +
                                            std::to_string(start_id));
        g.start = start_id;
    } else {
        g.start = g.size();
    }
    return g;
}

std::string serialize_system(const CollageSystem& g) {
    std::ostringstream out;
    for (int id = 1; id <= g.size(); ++id) {
        const Rule& r = g.rule(id);
        out << "X" << id << " -> ";
        switch (r.kind) {
            case RuleKind::Atomic:
                out << '\'' << r.atom << '\'';
                break;
            case RuleKind::Concat:
                out << "X" << r.left << " X" << r.right;
                break;
            case RuleKind::Repeat:
                out << "X" << r.left << " ^ " << r.repeat.get_str();
                break;
            case RuleKind::Truncate:
                out << "X" << r.left << " [" << r.begin.get_str() << ".." << r.end.get_str()
                    << ")";
                break;
        }
        out << '\n';
    }
    out << "start X" << g.start << '\n';
    return out.str();
}

}  // namespace collage
