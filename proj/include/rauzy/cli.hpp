#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rauzy/balanced.hpp"
#include "rauzy/errors.hpp"
#include "rauzy/fractal.hpp"
#include "rauzy/io.hpp"
#include "rauzy/raster.hpp"
#include "rauzy/spectral.hpp"
#include "rauzy/word.hpp"

namespace rauzy::cli {

// Exit codes: 0 success, 1 I/O or parse error, 2 validation error,
// 3 cap exceeded, 4 empty intersection suspected.
enum ExitCode : int {
    kOk = 0,
    kIoOrParse = 1,
    kValidation = 2,
    kCapExceeded = 3,
    kEmptyIntersection = 4,
};

namespace detail {

struct ParsedArgs {
    std::vector<std::string> positional;
    std::map<std::string, std::string> options;
    std::vector<std::string> flags;
};

inline ParsedArgs split_args(const std::vector<std::string>& args, std::size_t from,
                             const std::vector<std::string>& value_options,
                             const std::vector<std::string>& bool_flags) {
    ParsedArgs out;
    for (std::size_t i = from; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0) {
            if (std::find(bool_flags.begin(), bool_flags.end(), a) != bool_flags.end()) {
                out.flags.push_back(a);
            } else if (std::find(value_options.begin(), value_options.end(), a) != value_options.end()) {
                if (i + 1 >= args.size()) throw std::runtime_error("missing value for " + a);
                out.options[a] = args[++i];
            } else {
                throw std::runtime_error("unknown option " + a);
            }
        } else {
            out.positional.push_back(a);
        }
    }
    return out;
}

inline std::size_t size_option(const ParsedArgs& p, const std::string& name, std::size_t fallback) {
    auto it = p.options.find(name);
    if (it == p.options.end()) return fallback;
    const long long v = std::stoll(it->second);
    if (v <= 0) throw std::runtime_error(name + " must be positive");
    return static_cast<std::size_t>(v);
}

inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline void print_info(const Substitution& sigma, std::ostream& out) {
    const Alphabet& al = sigma.alphabet();
    out << "alphabet: " << al.letters() << "\n";
    for (int i = 0; i < al.size(); ++i)
        out << "rule: " << al.letter(i) << " -> " << sigma.image(i) << "\n";
    const IncidenceMatrix m = incidence_matrix(sigma);
    out << "incidence matrix:\n";
    for (int i = 0; i < m.d; ++i) {
        out << "  [";
        for (int j = 0; j < m.d; ++j) out << (j ? " " : "") << m.at(i, j);
        out << "]\n";
    }
    const CharPoly p = char_poly(m);
    out << "char poly: " << to_string(p) << "\n";
    out << "determinant: " << determinant(p) << "\n";
    const Classification cls = classify(m);
    const bool primitive = is_primitive(m);
    out << "primitive: " << (primitive ? "true" : "false") << "\n";
    out << "irreducible: " << (cls.irreducible ? "true" : "false")
        << (cls.irreducible_exact ? "" : " (heuristic)") << "\n";
    out << "unimodular: " << (cls.unimodular ? "true" : "false") << "\n";
    out << "pisot: " << (cls.pisot ? "true" : "false") << "\n";
    if (primitive) {
        const PerronData pd = perron_data(m);
        out << "dominant eigenvalue: " << fmt(pd.beta) << "\n";
        FixedPointStream stream = periodic_point(sigma);
        out << "periodic point: k=" << stream.exponent() << " seed=" << stream.seed()
            << " prefix=" << stream.prefix(24).substr(0, 24) << "\n";
    }
}

inline PointCloud drop_labels(PointCloud cloud) {
    std::fill(cloud.labels.begin(), cloud.labels.end(), 0);
    cloud.label_names = {"points"};
    return cloud;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("short write to " + path);
}

} // namespace detail

inline void print_usage(std::ostream& out) {
    out << "usage:\n"
        << "  rauzy info <file.sub>\n"
        << "  rauzy render <file.sub> --out F.ppm [--points N] [--width W] [--height H] [--subtiles]\n"
        << "  rauzy intersect <f1.sub> <f2.sub> [--out-morphism M.txt] [--render F.ppm]\n"
        << "        [--points N] [--width W] [--height H]\n"
        << "        [--seed-cap S] [--blocklen-cap L] [--blockcount-cap C]\n"
        << "  rauzy check-coincidence <file.sub> [--max-k K]\n"
        << "  rauzy aligned <f1.sub> <f2.sub> --letter c [--length N]\n"
        << "defaults: N=100000, W=H=800, S=10000, L=1000, C=10000, K=20\n"
        << "exit codes: 0 ok, 1 i/o or parse, 2 validation, 3 cap exceeded, 4 empty intersection\n";
}

/// Runs one CLI invocation; `args` excludes the program name. All reports go
/// to `out`, diagnostics to `err`; the return value is the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty()) {
            print_usage(err);
            return kIoOrParse;
        }
        const std::string& cmd = args[0];

        if (cmd == "info") {
            auto p = detail::split_args(args, 1, {}, {});
            if (p.positional.size() != 1) throw std::runtime_error("info takes exactly one file");
            detail::print_info(read_substitution_file(p.positional[0]), out);
            return kOk;
        }

        if (cmd == "render") {
            auto p = detail::split_args(args, 1, {"--points", "--out", "--width", "--height"}, {"--subtiles"});
            if (p.positional.size() != 1) throw std::runtime_error("render takes exactly one file");
            if (!p.options.count("--out")) throw std::runtime_error("render needs --out <file.ppm>");
            const Substitution sigma = read_substitution_file(p.positional[0]);
            const std::size_t n = detail::size_option(p, "--points", 100'000);
            const int w = static_cast<int>(detail::size_option(p, "--width", 800));
            const int h = static_cast<int>(detail::size_option(p, "--height", 800));
            const PerronData pd = perron_data(incidence_matrix(sigma));
            PointCloud cloud = rauzy_cloud(sigma, n, pd);
            const bool subtiles = !p.flags.empty();
            if (!subtiles) cloud = detail::drop_labels(std::move(cloud));
            write_ppm(render_ppm(cloud, w, h), p.options.at("--out"));
            err << "wrote " << p.options.at("--out") << " (" << cloud.size() << " points)\n";
            return kOk;
        }

        if (cmd == "intersect") {
            auto p = detail::split_args(args, 1,
                                        {"--out-morphism", "--render", "--points", "--width", "--height",
                                         "--seed-cap", "--blocklen-cap", "--blockcount-cap"},
                                        {});
            if (p.positional.size() != 2) throw std::runtime_error("intersect takes exactly two files");
            const Substitution s1 = read_substitution_file(p.positional[0]);
            const Substitution s2 = read_substitution_file(p.positional[1]);
            IntersectionCaps caps;
            caps.seed = detail::size_option(p, "--seed-cap", caps.seed);
            caps.block_length = detail::size_option(p, "--blocklen-cap", caps.block_length);
            caps.block_count = detail::size_option(p, "--blockcount-cap", caps.block_count);

            const IntersectionReport report = intersection_morphism(s1, s2, caps);
            if (report.status == IntersectionStatus::empty_intersection_suspected) {
                err << "empty intersection suspected: " << report.message << "\n";
                return kEmptyIntersection;
            }
            if (report.status == IntersectionStatus::cap_exceeded) {
                err << "cap exceeded: " << report.message << "\n";
                return kCapExceeded;
            }
            const BlockMorphism& m = *report.morphism;
            const std::string text = format_morphism(m);
            out << text;
            err << report.message << " (power " << report.power
                << ", max block length " << report.max_block_length << ")\n";
            if (p.options.count("--out-morphism")) detail::write_text(p.options.at("--out-morphism"), text);
            if (p.options.count("--render")) {
                const std::size_t n = detail::size_option(p, "--points", 100'000);
                const int w = static_cast<int>(detail::size_option(p, "--width", 800));
                const int h = static_cast<int>(detail::size_option(p, "--height", 800));
                const PerronData pd = perron_data(incidence_matrix(s1));
                const PointCloud cloud = common_points(m, n, pd);
                write_ppm(render_ppm(cloud, w, h), p.options.at("--render"));
                err << "wrote " << p.options.at("--render") << " (" << cloud.size() << " points)\n";
            }
            return kOk;
        }

        if (cmd == "check-coincidence") {
            auto p = detail::split_args(args, 1, {"--max-k"}, {});
            if (p.positional.size() != 1) throw std::runtime_error("check-coincidence takes exactly one file");
            const Substitution sigma = read_substitution_file(p.positional[0]);
            const int kcap = static_cast<int>(detail::size_option(p, "--max-k", 20));
            const CoincidenceReport report = strong_coincidence(sigma, kcap);
            for (const auto& [pair, w] : report.witnesses) {
                out << "pair (" << pair.first << "," << pair.second << "): witness k=" << w.k
                    << " letter=" << w.letter << " " << (w.via_prefix ? "prefix" : "suffix")
                    << "-offset=" << w.position << "\n";
            }
            if (report.holds)
                out << "strong coincidence: holds\n";
            else
                out << "strong coincidence: inconclusive within k <= " << kcap << "\n";
            return kOk;
        }

        if (cmd == "aligned") {
            auto p = detail::split_args(args, 1, {"--letter", "--length"}, {});
            if (p.positional.size() != 2) throw std::runtime_error("aligned takes exactly two files");
            if (!p.options.count("--letter") || p.options.at("--letter").size() != 1)
                throw std::runtime_error("aligned needs --letter <single letter>");
            const Substitution s1 = read_substitution_file(p.positional[0]);
            const Substitution s2 = read_substitution_file(p.positional[1]);
            const std::size_t n = detail::size_option(p, "--length", 100'000);
            const auto positions = aligned_letter_check(s1, s2, p.options.at("--letter")[0], n);
            out << "count " << positions.size() << "\n";
            for (std::size_t k : positions) out << k << "\n";
            return kOk;
        }

        print_usage(err);
        err << "unknown command: " << cmd << "\n";
        return kIoOrParse;
    } catch (const validation_error& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const numeric_error& e) {
        err << "numeric error: " << e.what() << "\n";
        return kValidation;
    } catch (const resource_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return kIoOrParse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIoOrParse;
    }
}

} // namespace rauzy::cli
