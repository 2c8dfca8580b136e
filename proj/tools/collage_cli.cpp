// Command line front end; talks to the core exclusively through the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "collage.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;  // well-formed input, negative verdict
constexpr int kExitError = 2;   // bad input or operational failure

struct SystemDeleter {
    void operator()(clg_system* g) const { clg_free(g); }
};
using SystemPtr = std::unique_ptr<clg_system, SystemDeleter>;

struct StringDeleter {
    void operator()(char* s) const { clg_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    if (path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << bytes;
}

[[noreturn]] void die(const std::string& msg, int code = kExitError) {
    std::cerr << "error: " << msg << "\n";
    std::exit(code);
}

SystemPtr parse_or_die(const std::string& path) {
    std::string bytes = read_file(path);
    clg_system* raw = nullptr;
    if (clg_parse(bytes.c_str(), &raw) != CLG_OK) die(clg_last_error());
    return SystemPtr(raw);
}

std::string run_solver(const std::string& command, const std::string& wcnf_path) {
    std::string full = command + " " + wcnf_path + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) die("cannot run solver: " + command);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    if (status != 0) die("solver exited with status " + std::to_string(status) + "; output:\n" + out);
    return out;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        char templ[] = "/tmp/collage-XXXXXX";
        int fd = mkstemp(templ);
        if (fd < 0) die("cannot create temporary file");
        path = templ;
        FILE* f = fdopen(fd, "wb");
        fwrite(contents.data(), 1, contents.size(), f);
        fclose(f);
    }
    ~TempFile() { std::remove(path.c_str()); }
};

// encode + external solver + certified decode; exits on failure
int solve_text(const std::string& text, const std::string& solver, clg_system** out_system) {
    StringPtr wcnf, catalog;
    {
        char *w = nullptr, *c = nullptr;
        if (clg_encode(text.c_str(), 0, &w, &c) != CLG_OK) die(clg_last_error());
        wcnf.reset(w);
        catalog.reset(c);
    }
    TempFile tmp(wcnf.get());
    std::string model = run_solver(solver, tmp.path);
    if (model.find("s OPTIMUM FOUND") == std::string::npos)
        die("solver did not report an optimum; output:\n" + model);
    clg_system* sys = nullptr;
    int size = 0;
    if (clg_decode(text.c_str(), catalog.get(), model.c_str(), &sys, &size) != CLG_OK)
        die(clg_last_error());
    if (out_system)
        *out_system = sys;
    else
        clg_free(sys);
    return size;
}

int cmd_validate(const std::string& path) {
    SystemPtr g = parse_or_die(path);
    char* report = nullptr;
    clg_status st = clg_validate(g.get(), &report);
    StringPtr guard(report);
    if (st == CLG_OK) {
        std::cout << "valid\n";
        return kExitOk;
    }
    if (st == CLG_ERR_INVALID) {
        std::cout << "invalid\n" << (report ? report : "") << "\n";
        return kExitDomain;
    }
    die(clg_last_error());
}

int cmd_expand(const std::string& path, uint64_t limit) {
    SystemPtr g = parse_or_die(path);
    char* out = nullptr;
    if (clg_expand(g.get(), limit, &out) != CLG_OK) die(clg_last_error());
    StringPtr guard(out);
    std::cout << out << "\n";
    return kExitOk;
}

int cmd_stats(const std::string& path) {
    SystemPtr g = parse_or_die(path);
    clg_stats_t s;
    if (clg_stats(g.get(), &s) != CLG_OK) die(clg_last_error());
    std::cout << "m " << s.m << "\nm_tr " << s.m_tr << "\nsigma " << s.sigma << "\ninternal "
              << (s.internal ? "yes" : "no") << "\n";
    if (s.internal)
        std::cout << "grammar_tree_internal_nodes " << s.grammar_tree_internal_nodes
                  << "\ngrammar_tree_leaves " << s.grammar_tree_leaves << "\n";
    return kExitOk;
}

int cmd_internalize(const std::string& path, const std::string& out_path) {
    SystemPtr g = parse_or_die(path);
    clg_system* raw = nullptr;
    uint64_t steps = 0;
    if (clg_internalize(g.get(), &raw, &steps) != CLG_OK) die(clg_last_error());
    SystemPtr internal(raw);
    char* text = nullptr;
    if (clg_serialize(internal.get(), &text) != CLG_OK) die(clg_last_error());
    StringPtr guard(text);
    write_file(out_path, text);
    std::cerr << "steps " << steps << "\n";
    return kExitOk;
}

int cmd_encode(const std::string& text, const std::string& format, const std::string& out_path,
               std::string catalog_path) {
    char *wcnf = nullptr, *catalog = nullptr;
    if (clg_encode(text.c_str(), format == "new" ? 1 : 0, &wcnf, &catalog) != CLG_OK)
        die(clg_last_error());
    StringPtr wguard(wcnf), cguard(catalog);
    write_file(out_path, wcnf);
    if (catalog_path.empty() && out_path != "-") catalog_path = out_path + ".catalog";
    if (!catalog_path.empty()) write_file(catalog_path, catalog);
    return kExitOk;
}

int cmd_decode(const std::string& model_path, const std::string& catalog_path,
               const std::string& text, const std::string& out_path) {
    std::string model = read_file(model_path);
    std::string catalog = read_file(catalog_path);
    clg_system* raw = nullptr;
    int size = 0;
    clg_status st = clg_decode(text.c_str(), catalog.c_str(), model.c_str(), &raw, &size);
    if (st == CLG_ERR_DECODE) {
        std::cerr << "model rejected: " << clg_last_error() << "\n";
        return kExitDomain;
    }
    if (st != CLG_OK) die(clg_last_error());
    SystemPtr sys(raw);
    char* text_out = nullptr;
    if (clg_serialize(sys.get(), &text_out) != CLG_OK) die(clg_last_error());
    StringPtr guard(text_out);
    clg_stats_t s;
    if (clg_stats(sys.get(), &s) != CLG_OK) die(clg_last_error());
    std::cout << size << "\n";
    std::cerr << "h " << (s.m - s.m_tr - s.sigma + 1) << "\nm_tr " << s.m_tr << "\nsigma "
              << s.sigma << "\n";
    if (!out_path.empty()) write_file(out_path, text_out);
    return kExitOk;
}

int cmd_solve(const std::string& text, const std::string& solver, const std::string& out_path) {
    clg_system* raw = nullptr;
    int size = solve_text(text, solver, out_path.empty() ? nullptr : &raw);
    std::cout << size << "\n";
    if (!out_path.empty()) {
        SystemPtr sys(raw);
        char* text_out = nullptr;
        if (clg_serialize(sys.get(), &text_out) != CLG_OK) die(clg_last_error());
        StringPtr guard(text_out);
        write_file(out_path, text_out);
    }
    return kExitOk;
}

int cmd_oracle(const std::string& text) {
    int size = 0;
    clg_system* raw = nullptr;
    if (clg_oracle(text.c_str(), -1, &size, &raw) != CLG_OK) die(clg_last_error());
    SystemPtr witness(raw);
    char* text_out = nullptr;
    if (clg_serialize(witness.get(), &text_out) != CLG_OK) die(clg_last_error());
    StringPtr guard(text_out);
    std::cout << size << "\n" << text_out;
    return kExitOk;
}

int cmd_selftest(int max_len, const std::string& solver) {
    int checked = 0;
    for (int len = 1; len <= max_len; ++len) {
        for (long mask = 0; mask < (1L << len); ++mask) {
            std::string t;
            for (int i = 0; i < len; ++i) t += (mask >> i) & 1 ? 'b' : 'a';
            int expected = 0;
            if (clg_oracle(t.c_str(), -1, &expected, nullptr) != CLG_OK) die(clg_last_error());
            int got = solve_text(t, solver, nullptr);
            ++checked;
            if (got != expected) {
                std::cerr << "mismatch on \"" << t << "\": solver " << got << ", search "
                          << expected << "\n";
                return kExitDomain;
            }
        }
        std::cerr << "length " << len << " done\n";
    }
    std::cout << "ok: " << checked << " strings agree\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collage system toolkit"};
    app.require_subcommand(1);

    std::string file, out_path = "-", text, catalog_path, model_path;
    std::string format = "legacy", solver = "maxsat";
    uint64_t limit = 1u << 20;
    int max_len = 6;

    auto* validate = app.add_subcommand("validate", "check a .clg file");
    validate->add_option("file", file, ".clg file, or - for stdin")->required();

    auto* expand = app.add_subcommand("expand", "print the derived string");
    expand->add_option("file", file)->required();
    expand->add_option("--limit", limit, "maximum string length");

    auto* stats = app.add_subcommand("stats", "size and grammar tree statistics");
    stats->add_option("file", file)->required();

    auto* internalize = app.add_subcommand("internalize", "convert to an internal system");
    internalize->add_option("file", file)->required();
    internalize->add_option("-o,--output", out_path, "output .clg path");

    auto* encode = app.add_subcommand("encode", "write the MAX-SAT instance for a text");
    encode->add_option("text", text)->required();
    encode->add_option("-o,--output", out_path, "output WCNF path");
    encode->add_option("--format", format)->check(CLI::IsMember({"legacy", "new"}));
    encode->add_option("--catalog", catalog_path, "catalog sidecar path");

    auto* decode = app.add_subcommand("decode", "certify a solver model");
    decode->add_option("model", model_path, "solver output file")->required();
    decode->add_option("--catalog", catalog_path)->required();
    decode->add_option("--text", text)->required();
    std::string decode_out;
    decode->add_option("-o,--output", decode_out, "write the certified system here");

    auto* solve = app.add_subcommand("solve", "smallest internal system via a MAX-SAT solver");
    solve->add_option("text", text)->required();
    solve->add_option("--solver", solver, "solver command, given the WCNF path as argument");
    std::string solve_out;
    solve->add_option("-o,--output", solve_out, "write the optimal system here");

    auto* oracle = app.add_subcommand("oracle", "smallest internal system by exhaustive search");
    oracle->add_option("text", text)->required();

    auto* selftest = app.add_subcommand("selftest", "compare solver against exhaustive search");
    selftest->add_option("--max-len", max_len, "maximum text length");
    selftest->add_option("--solver", solver);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(file);
        if (expand->parsed()) return cmd_expand(file, limit);
        if (stats->parsed()) return cmd_stats(file);
        if (internalize->parsed()) return cmd_internalize(file, out_path);
        if (encode->parsed()) return cmd_encode(text, format, out_path, catalog_path);
        if (decode->parsed()) return cmd_decode(model_path, catalog_path, text, decode_out);
        if (solve->parsed()) return cmd_solve(text, solver, solve_out);
        if (oracle->parsed()) return cmd_oracle(text);
        if (selftest->parsed()) return cmd_selftest(max_len, solver);
    } catch (const std::exception& e) {
        die(e.what());
    }
    return kExitError;
}
