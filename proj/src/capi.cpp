#include "collage.h"

#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

#include "collage/clg_format.hpp"
#include "collage/decode.hpp"
#include "collage/encode.hpp"
#include "collage/expand.hpp"
#include "collage/grammar_tree.hpp"
#include "collage/internalize.hpp"
#include "collage/oracle.hpp"

struct clg_system {
    collage::CollageSystem g;
};

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

clg_status fail(clg_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

// Runs fn, translating exceptions to status codes.
template <typename Fn>
clg_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const collage::ParseError& e) {
        return fail(CLG_ERR_PARSE, e.what());
    } catch (const collage::LimitExceeded& e) {
        return fail(CLG_ERR_LIMIT, std::string(e.what()) + " (length " + e.length.get_str() + ")");
    } catch (const collage::NotInternal& e) {
        return fail(CLG_ERR_NOT_INTERNAL, e.what());
    } catch (const collage::DecodeError& e) {
        return fail(CLG_ERR_DECODE, e.what());
    } catch (const collage::BoundExceeded& e) {
        return fail(CLG_ERR_LIMIT, e.what());
    } catch (const collage::Error& e) {
        return fail(CLG_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(CLG_ERR_INTERNAL, e.what());
    }
}

}  // namespace

extern "C" {

const char* clg_last_error(void) { return g_last_error.c_str(); }

clg_status clg_parse(const char* text, clg_system** out) {
    if (!text || !out) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        *out = new clg_system{collage::parse_system(text)};
        return CLG_OK;
    });
}

void clg_free(clg_system* g) { delete g; }

void clg_string_free(char* s) { std::free(s); }

clg_status clg_serialize(const clg_system* g, char** out) {
    if (!g || !out) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        *out = dup_string(collage::serialize_system(g->g));
        return CLG_OK;
    });
}

clg_status clg_validate(const clg_system* g, char** report) {
    if (!g || !report) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        collage::ValidationReport r = collage::validate(g->g);
        if (r.ok()) {
            *report = nullptr;
            return CLG_OK;
        }
        std::string text;
        for (const collage::Violation& v : r.violations) {
            if (!text.empty()) text += '\n';
            if (v.id) text += "X" + std::to_string(v.id) + ": ";
            text += v.message;
        }
        *report = dup_string(text);
        return fail(CLG_ERR_INVALID, r.violations.front().message);
    });
}

clg_status clg_expand(const clg_system* g, uint64_t limit, char** out) {
    if (!g || !out) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        *out = dup_string(collage::expand(g->g, limit));
        return CLG_OK;
    });
}

clg_status clg_stats(const clg_system* g, clg_stats_t* out) {
    if (!g || !out) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        collage::SystemStats s = collage::stats(g->g);
        *out = {s.m, s.m_tr, s.sigma, s.grammar_tree_internal_nodes, s.grammar_tree_leaves,
                s.internal ? 1 : 0};
        return CLG_OK;
    });
}

clg_status clg_internalize(const clg_system* g, clg_system** out, uint64_t* steps) {
    if (!g || !out) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        collage::InternalizeResult r = collage::internalize(g->g);
        *out = new clg_system{std::move(r.system)};
        if (steps) *steps = r.steps;
        return CLG_OK;
    });
}

clg_status clg_encode(const char* text, int wcnf_format, char** wcnf, char** catalog) {
    if (!text || !wcnf) return fail(CLG_ERR_ARG, "null argument");
    if (!*text) return fail(CLG_ERR_ARG, "text must be nonempty");
    if (wcnf_format != 0 && wcnf_format != 1) return fail(CLG_ERR_ARG, "bad wcnf format");
    return guarded([&] {
        collage::MaxSatInstance inst = collage::encode(text);
        *wcnf = dup_string(collage::write_wcnf(
            inst, wcnf_format == 0 ? collage::WcnfFormat::Legacy : collage::WcnfFormat::New));
        if (catalog) *catalog = dup_string(collage::write_catalog_sidecar(inst.catalog));
        return CLG_OK;
    });
}

clg_status clg_decode(const char* text, const char* catalog, const char* model,
                      clg_system** out, int* size) {
    if (!text || !catalog || !model || !out) return fail(CLG_ERR_ARG, "null argument");
    return guarded([&] {
        collage::VariableCatalog cat = collage::read_catalog_sidecar(catalog, text);
        collage::CertifiedResult r = collage::certified_size(model, cat);
        *out = new clg_system{std::move(r.system)};
        if (size) *size = r.size;
        return CLG_OK;
    });
}

clg_status clg_oracle(const char* text, int max_m, int* size, clg_system** witness) {
    if (!text || !size) return fail(CLG_ERR_ARG, "null argument");
    if (!*text) return fail(CLG_ERR_ARG, "text must be nonempty");
    return guarded([&] {
        collage::OracleResult r = collage::brute_force_chat(text, max_m);
        *size = r.size;
        if (witness) *witness = new clg_system{collage::reconstruct(r.witness, text)};
        return CLG_OK;
    });
}

}  // extern "C"
