#include "collage/encode.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace collage {

namespace {

std::string name(const char* base, std::initializer_list<int> subs) {
    std::string s = base;
    s += '(';
    bool first = true;
    for (int v : subs) {
        if (!first) s += ',';
        first = false;
        s += std::to_string(v);
    }
    s += ')';
    return s;
}

}  // namespace

VariableCatalog build_catalog(const std::string& text) {
    if (text.empty()) throw Error("empty text");
    VariableCatalog cat;
    cat.text = text;
    int n = static_cast<int>(text.size());
    cat.n = n;
    cat.names.push_back("");  // ids are 1-based

    auto sub_eq = [&](int a, int b, int len) {
        return text.compare(static_cast<size_t>(a - 1), static_cast<size_t>(len), text,
                            static_cast<size_t>(b - 1), static_cast<size_t>(len)) == 0;
    };
    auto fresh = [&](std::string nm) {
        cat.names.push_back(std::move(nm));
        return ++cat.var_count;
    };

    for (int i = 1; i <= n + 1; ++i) cat.p.push_back(fresh(name("p", {i})));

    for (int i = 1; i <= n; ++i)
        for (int l = 1; l <= n + 1 - i; ++l) cat.f[{i, l}] = fresh(name("f", {i, l}));

    // refA: a non-overlapping copy strictly to the left
    for (int i = 1; i <= n - 1; ++i)
        for (int l = 2; l <= n + 1 - i; ++l)
            for (int ip = 1; ip <= i - l; ++ip)
                if (sub_eq(ip, i, l)) cat.refA[{ip, i, l}] = fresh(name("refA", {ip, i, l}));

    // refB: an overlapping copy whose offset divides the length (a repeat)
    for (int i = 1; i <= n - 1; ++i)
        for (int l = 2; l <= n + 1 - i; ++l)
            for (int ip = std::max(1, i - l + 1); ip <= i - 1; ++ip)
                if (l % (i - ip) == 0 && sub_eq(ip, i, l))
                    cat.refB[{ip, i, l}] = fresh(name("refB", {ip, i, l}));

    // refC: T[i..i+l) contained in a disjoint T[i'..i'+l')
    for (int i = 1; i <= n; ++i)
        for (int l = 2; l <= n + 1 - i; ++l)
            for (int ip = 1; ip <= n; ++ip)
                for (int lp = 2; lp <= n + 1 - ip; ++lp) {
                    if (!(i + l <= ip || ip + lp <= i)) continue;  // intervals must be disjoint
                    bool contained = false;
                    for (int off = 0; off + l <= lp && !contained; ++off)
                        contained = sub_eq(ip + off, i, l);
                    if (contained) cat.refC[{ip, lp, i, l}] = fresh(name("refC", {ip, lp, i, l}));
                }

    // dref: some factor starting at i refers to T[i'..i'+l')
    std::set<std::tuple<int, int, int>> dref_dom;
    for (const auto& [k, v] : cat.refA) {
        auto [ip, i, l] = k;
        dref_dom.insert({ip, l, i});
    }
    for (const auto& [k, v] : cat.refB) {
        auto [ip, i, l] = k;
        dref_dom.insert({ip, i - ip, i});
    }
    for (const auto& [k, v] : cat.refC) {
        auto [ip, lp, i, l] = k;
        dref_dom.insert({ip, lp, i});
    }
    for (const auto& [ip, lp, i] : dref_dom) cat.dref[{ip, lp, i}] = fresh(name("dref", {ip, lp, i}));

    // q: T[i'..i'+l') is an interval of the set I
    std::set<std::pair<int, int>> q_dom;
    for (const auto& [ip, lp, i] : dref_dom) q_dom.insert({ip, lp});
    for (const auto& [k, v] : cat.refB) {
        auto [ip, i, l] = k;
        q_dom.insert({ip, l + i - ip});  // the repetition node itself (I3)
    }
    for (const auto& [ip, lp] : q_dom) cat.q[{ip, lp}] = fresh(name("q", {ip, lp}));

    for (int i = 1; i <= n; ++i)
        for (int l = 1; l <= n + 1 - i; ++l)
            for (int d = 0; d <= n; ++d) cat.depth[{i, l, d}] = fresh(name("depth", {i, l, d}));

    return cat;
}

namespace {

class Encoder {
public:
    explicit Encoder(const std::string& text) {
        inst_.catalog = build_catalog(text);
        inst_.var_count = inst_.catalog.var_count;
    }

    MaxSatInstance run() {
        const VariableCatalog& c = inst_.catalog;
        int n = c.n;

        hard({c.p_var(1)});
        hard({c.p_var(n + 1)});

        // (1) factors are maximal runs of non-start positions
        for (const auto& [il, fv] : c.f) {
            auto [i, l] = il;
            hard({-fv, c.p_var(i)});
            for (int j = 1; j < l; ++j) hard({-fv, -c.p_var(i + j)});
            hard({-fv, c.p_var(i + l)});
            Clause back;
            back.lits.push_back(fv);
            back.lits.push_back(-c.p_var(i));
            for (int j = 1; j < l; ++j) back.lits.push_back(c.p_var(i + j));
            back.lits.push_back(-c.p_var(i + l));
            hard(std::move(back.lits));
        }

        // candidate reference literals per (i, l)
        std::map<std::pair<int, int>, std::vector<int>> cands;
        for (const auto& [k, v] : c.refA) {
            auto [ip, i, l] = k;
            cands[{i, l}].push_back(v);
        }
        for (const auto& [k, v] : c.refB) {
            auto [ip, i, l] = k;
            cands[{i, l}].push_back(v);
        }
        for (const auto& [k, v] : c.refC) {
            auto [ip, lp, i, l] = k;
            cands[{i, l}].push_back(v);
        }
        for (auto& [il, lits] : cands) std::sort(lits.begin(), lits.end());

        // (2) substrings with no candidate cannot be multi-character factors
        for (const auto& [il, fv] : c.f) {
            auto [i, l] = il;
            if (l > 1 && !cands.count(il)) hard({-fv});
        }

        // (3) a multi-character factor has a reference and vice versa
        for (const auto& [il, lits] : cands) {
            int fv = c.f.at(il);
            Clause big;
            big.lits.push_back(-fv);
            for (int v : lits) {
                big.lits.push_back(v);
                hard({-v, fv});
            }
            hard(std::move(big.lits));
        }

        // (4) at most one reference per substring (sequential counter)
        for (const auto& [il, lits] : cands) at_most_one(lits, il.first, il.second);

        // (4b) a referred interval may not be the rest part of a repetition:
        // if some refB makes T[i'..i'+l') a type-B factor, no reference may
        // target exactly that interval (it is a grammar tree leaf)
        {
            std::map<std::pair<int, int>, std::vector<int>> b_at;  // (i', l') -> refB vars
            for (const auto& [k, v] : c.refB) b_at[{std::get<1>(k), std::get<2>(k)}].push_back(v);
            auto exclude = [&](int ref_var, int ip, int lp) {
                auto it = b_at.find({ip, lp});
                if (it == b_at.end()) return;
                for (int bv : it->second)
                    if (bv != ref_var) hard({-ref_var, -bv});
            };
            for (const auto& [k, v] : c.refA) exclude(v, std::get<0>(k), std::get<2>(k));
            for (const auto& [k, v] : c.refB) exclude(v, std::get<0>(k), std::get<1>(k) - std::get<0>(k));
            for (const auto& [k, v] : c.refC) exclude(v, std::get<0>(k), std::get<1>(k));
        }

        // (5) dref collects the references aimed at T[i'..i'+l')
        for (const auto& [k, dv] : c.dref) {
            auto [ip, lp, i] = k;
            std::vector<int> sources;
            if (auto it = c.refA.find({ip, i, lp}); it != c.refA.end())
                sources.push_back(it->second);
            for (const auto& [bk, bv] : c.refB) {
                auto [bip, bi, bl] = bk;
                if (bip == ip && bi == i && i - ip == lp) sources.push_back(bv);
            }
            for (const auto& [ck, cv] : c.refC) {
                auto [cip, clp, ci, cl] = ck;
                if (cip == ip && clp == lp && ci == i) sources.push_back(cv);
            }
            std::sort(sources.begin(), sources.end());
            Clause big;
            big.lits.push_back(-dv);
            for (int v : sources) {
                big.lits.push_back(v);
                hard({-v, dv});
            }
            hard(std::move(big.lits));
        }

        // (6) q marks the intervals of I
        for (const auto& [k, qv] : c.q) {
            auto [ip, lp] = k;
            std::vector<int> sources;
            for (const auto& [dk, dv] : c.dref) {
                auto [dip, dlp, di] = dk;
                if (dip == ip && dlp == lp) sources.push_back(dv);
            }
            for (const auto& [bk, bv] : c.refB) {
                auto [bip, bi, bl] = bk;
                if (bip == ip && bl + bi - bip == lp) sources.push_back(bv);
            }
            std::sort(sources.begin(), sources.end());
            Clause big;
            big.lits.push_back(-qv);
            for (int v : sources) {
                big.lits.push_back(v);
                hard({-v, qv});
            }
            hard(std::move(big.lits));
        }

        // (7) an interval of I starts at a factor start; its end must also be
        // a factor boundary, or the model would not name a factor range
        for (const auto& [k, qv] : c.q) {
            hard({-qv, c.p_var(k.first)});
            hard({-qv, c.p_var(k.first + k.second)});
        }

        // (8) I is crossing-free
        for (auto a = c.q.begin(); a != c.q.end(); ++a)
            for (auto b = std::next(a); b != c.q.end(); ++b) {
                auto [i1, l1] = a->first;
                auto [i2, l2] = b->first;
                if (i1 < i2 && i2 < i1 + l1 && i1 + l1 < i2 + l2)
                    hard({-a->second, -b->second});
                else if (i2 < i1 && i1 < i2 + l2 && i2 + l2 < i1 + l1)
                    hard({-a->second, -b->second});
            }

        // (9) character depths are at least 0, and below n: any reference
        // cycle pumps depths past every threshold, so capping at n - 1
        // (enough for chains of up to n factors) rules cycles out
        for (int i = 1; i <= n; ++i) {
            hard({c.depth.at({i, 1, 0})});
            hard({-c.depth.at({i, 1, n})});
        }

        // (10) depth thresholds are downward closed
        for (int i = 1; i <= n; ++i)
            for (int d = 1; d <= n; ++d)
                hard({-c.depth.at({i, 1, d}), c.depth.at({i, 1, d - 1})});

        // (11) characters of the same factor share their depth
        for (int i = 2; i <= n; ++i)
            for (int d = 0; d <= n; ++d) {
                hard({c.p_var(i), -c.depth.at({i, 1, d}), c.depth.at({i - 1, 1, d})});
                hard({c.p_var(i), c.depth.at({i, 1, d}), -c.depth.at({i - 1, 1, d})});
            }

        // (12) substring depth is the maximum over its characters
        for (int i = 1; i <= n; ++i)
            for (int l = 2; l <= n + 1 - i; ++l)
                for (int d = 0; d <= n; ++d) {
                    int sv = c.depth.at({i, l, d});
                    Clause big;
                    big.lits.push_back(-sv);
                    for (int j = i; j < i + l; ++j) {
                        int cv = c.depth.at({j, 1, d});
                        big.lits.push_back(cv);
                        hard({-cv, sv});
                    }
                    hard(std::move(big.lits));
                }

        // (13) a referring factor is strictly deeper than its referred range
        for (const auto& [k, dv] : c.dref) {
            auto [ip, lp, i] = k;
            for (int d = 1; d <= n; ++d)
                hard({-dv, c.depth.at({i, 1, d}), -c.depth.at({ip, lp, d - 1})});
        }

        // soft objective: minimize factor count and truncation references
        for (int i = 2; i <= n; ++i) soft({-c.p_var(i)});
        for (const auto& [k, v] : c.refC) soft({-v});

        return std::move(inst_);
    }

private:
    void hard(std::vector<int> lits) { inst_.hard.push_back({std::move(lits)}); }
    void soft(std::vector<int> lits) { inst_.soft.push_back({std::move(lits)}); }

    // Sinz-style sequential counter for <= 1, linear in the candidate count
    void at_most_one(const std::vector<int>& xs, int i, int l) {
        size_t k = xs.size();
        if (k <= 1) return;
        std::vector<int> s(k - 1);
        for (size_t j = 0; j < k - 1; ++j) {
            inst_.aux_names.push_back(name("amo", {i, l, static_cast<int>(j + 1)}));
            s[j] = ++inst_.var_count;
        }
        hard({-xs[0], s[0]});
        for (size_t j = 1; j < k - 1; ++j) {
            hard({-xs[j], s[j]});
            hard({-s[j - 1], s[j]});
            hard({-xs[j], -s[j - 1]});
        }
        hard({-xs[k - 1], -s[k - 2]});
    }

    MaxSatInstance inst_;
};

}  // namespace

MaxSatInstance encode(const std::string& text) { return Encoder(text).run(); }

std::string write_wcnf(const MaxSatInstance& inst, WcnfFormat format) {
    std::ostringstream out;
    out << "c collage maxsat encoding, n=" << inst.catalog.n << "\n";
    for (int v = 1; v <= inst.catalog.var_count; ++v)
        out << "c var " << v << " = " << inst.catalog.names[static_cast<size_t>(v)] << "\n";
    for (int v = inst.catalog.var_count + 1; v <= inst.var_count; ++v)
        out << "c var " << v << " = "
            << inst.aux_names[static_cast<size_t>(v - inst.catalog.var_count - 1)]
            << " (counter auxiliary)\n";

    auto lits = [](const Clause& cl) {
        std::string s;
        for (int lit : cl.lits) {
            s += std::to_string(lit);
            s += ' ';
        }
        s += '0';
        return s;
    };

    if (format == WcnfFormat::Legacy) {
        uint64_t top = inst.soft.size() + 1;
        out << "p wcnf " << inst.var_count << ' ' << inst.hard.size() + inst.soft.size() << ' '
            << top << "\n";
        for (const Clause& cl : inst.hard) out << top << ' ' << lits(cl) << "\n";
        for (const Clause& cl : inst.soft) out << "1 " << lits(cl) << "\n";
    } else {
        for (const Clause& cl : inst.hard) out << "h " << lits(cl) << "\n";
        for (const Clause& cl : inst.soft) out << "1 " << lits(cl) << "\n";
    }
    return out.str();
}

std::string write_catalog_sidecar(const VariableCatalog& cat) {
    std::ostringstream out;
    out << "collage-catalog 1\n";
    out << "n " << cat.n << "\n";
    for (int v = 1; v <= cat.var_count; ++v) {
        const std::string& nm = cat.names[static_cast<size_t>(v)];
        size_t paren = nm.find('(');
        out << "var " << v << ' ' << nm.substr(0, paren) << ' ';
        std::string subs = nm.substr(paren + 1, nm.size() - paren - 2);
        std::replace(subs.begin(), subs.end(), ',', ' ');
        out << subs << "\n";
    }
    return out.str();
}

VariableCatalog read_catalog_sidecar(const std::string& bytes, const std::string& text) {
    VariableCatalog cat = build_catalog(text);
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line) || line.rfind("collage-catalog 1", 0) != 0)
        throw DecodeError("catalog sidecar: bad or missing header");
    if (!std::getline(in, line) || line != "n " + std::to_string(cat.n))
        throw DecodeError("catalog sidecar: text length does not match the given text");
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag, nm;
        int id;
        ls >> tag >> id >> nm;
        if (tag != "var") throw DecodeError("catalog sidecar: unexpected line: " + line);
        std::string subs, piece;
        while (ls >> piece) {
            if (!subs.empty()) subs += ',';
            subs += piece;
        }
        std::string expect = nm + "(" + subs + ")";
        if (id < 1 || id > cat.var_count || cat.names[static_cast<size_t>(id)] != expect)
            throw DecodeError("catalog sidecar disagrees with the text at var " +
                              std::to_string(id));
        ++seen;
    }
    if (seen != cat.var_count)
        throw DecodeError("catalog sidecar is missing variables");
    return cat;
}

}  // namespace collage
