#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage or unreadable
// input, 3 no local map exists, 4 budget exceeded, 5 validation failure.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iknot/cfk_io.hpp"
#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/homology.hpp"
#include "iknot/knotlib.hpp"
#include "iknot/localequiv.hpp"
#include "iknot/morphism.hpp"
#include "iknot/tensorsum.hpp"

namespace iknot::cli {

enum Exit : int { kOk = 0, kUsage = 2, kNone = 3, kResource = 4, kInvalid = 5 };

/// Raised for command-level failures that map to a specific exit code.
struct Failure {
    int code;
    std::string message;
};

struct Options {
    std::string cap = "auto";
    std::size_t budget = SearchOptions{}.budget;
    std::string format = "text";
    std::string output;
};

inline SearchOptions search_options(const Options& o) {
    SearchOptions s;
    s.budget = o.budget;
    if (o.cap != "auto") {
        try {
            std::size_t used = 0;
            s.cap = std::stoi(o.cap, &used);
            if (used != o.cap.size() || s.cap < 0) throw std::invalid_argument(o.cap);
        } catch (const std::exception&) {
            throw Failure{kUsage, "--cap takes 'auto' or a non-negative integer, got '" + o.cap + "'"};
        }
    }
    return s;
}

inline bool records(const Options& o) { return o.format == "records"; }

/// A parsed input file: the complex and any iota pins it carries.
struct Input {
    std::string path;
    ComplexPtr complex;
    std::vector<std::pair<int, BitVec>> pins;
    CfkDocument doc;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Input load(const std::string& path, bool require_valid = true) {
    Input in;
    in.path = path;
    in.doc = parse_cfk(read_file(path));
    if (!in.doc.complex) throw Failure{kUsage, path + ": no complex header"};
    in.complex = share(*in.doc.complex);
    in.pins = iota_pins(*in.complex, in.doc.iota);
    if (require_valid) {
        const auto rep = validate(*in.complex);
        if (!rep.ok()) throw Failure{kInvalid, path + ": " + rep.messages.front()};
    }
    return in;
}

inline void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw Failure{kUsage, "cannot write '" + o.output + "'"};
    f << text;
}

/// Enumerated completions that agree with the file's iota pins.
inline std::vector<IotaCompletion> completions(const Input& in, const SearchOptions& s) {
    std::vector<IotaCompletion> out;
    for (auto& c : enumerate_iota_completions(in.complex, s))
        if (satisfies_pins(c.almost, in.pins)) out.push_back(std::move(c));
    return out;
}

inline int cmd_build(const Options& o, const std::string& knot, std::ostream& out) {
    emit(o, out, render_complex(build_knot(knot)));
    return kOk;
}

inline int cmd_validate(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path, false);
    const auto rep = validate(*in.complex);
    auto flag = [&](const char* k, bool v) {
        out << k << (records(o) ? (v ? "=1" : "=0") : (v ? ": pass" : ": fail")) << "\n";
    };
    flag("square_zero", rep.square_zero);
    flag("grading_law", rep.grading_law);
    flag("reduced", rep.reduced);
    flag("symmetric", rep.symmetric);
    for (const auto& m : rep.messages) out << (records(o) ? "message=" : "  ") << m << "\n";
    return rep.ok() ? kOk : kInvalid;
}

inline int cmd_homology(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    const FUDecomp d = hfk_minus(*in.complex);
    if (!records(o)) {
        out << to_string(d) << "\n";
        return kOk;
    }
    for (int g : d.towers) out << "kind=tower gr=" << g << "\n";
    for (const auto& t : d.torsion) out << "kind=torsion order=" << t.order << " gr=" << t.grading << "\n";
    return kOk;
}

inline int cmd_torsion_order(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    const int k = torsion_order(hfk_minus(*in.complex));
    out << (records(o) ? "torsion_order=" : "") << k << "\n";
    return kOk;
}

inline int cmd_phi_psi(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    const auto dm = derivative_maps(in.complex);
    const LinMap pp = compose(dm.psi, dm.phi);
    emit(o, out, render_map("Phi", dm.phi) + render_map("Psi", dm.psi) + render_map("PsiPhi", pp));
    return kOk;
}

inline int cmd_dual(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    emit(o, out, render_complex(dualize(*in.complex)));
    return kOk;
}

inline int cmd_tensor(const Options& o, const std::string& a, const std::string& b, int variant, std::ostream& out) {
    const Input ia = load(a), ib = load(b);
    const SearchOptions s = search_options(o);
    std::string text;
    if (ia.pins.empty() && ib.pins.empty()) {
        text = render_complex(tensor(*ia.complex, *ib.complex));
    } else {
        const auto ca = completions(ia, s), cb = completions(ib, s);
        if (ca.size() != 1 || cb.size() != 1)
            throw Failure{kInvalid, "iota lines must determine iota uniquely on both factors (found " +
                                        std::to_string(ca.size()) + " and " + std::to_string(cb.size()) +
                                        " completions)"};
        const ProductIota p = product_iota(ia.complex, ca[0].almost, ib.complex, cb[0].almost, variant);
        text = render_complex(*p.complex) + render_iota(*p.complex, p.iota);
    }
    emit(o, out, text);
    return kOk;
}

inline int cmd_iota_enum(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    const auto cs = completions(in, search_options(o));
    const Complex& c = *in.complex;
    if (!records(o)) out << "# " << cs.size() << " completion" << (cs.size() == 1 ? "" : "s") << "\n";
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (records(o)) {
            const BitMatrix u = cs[k].almost.unit();
            for (std::size_t x = 0; x < c.size(); ++x) {
                std::string img;
                for (std::size_t y = 0; y < c.size(); ++y)
                    if (u.get(y, x)) img += (img.empty() ? "" : "+") + c.gen(static_cast<int>(y)).name;
                out << "completion=" << k << " gen=" << c.gen(static_cast<int>(x)).name
                    << " image=" << (img.empty() ? "0" : img) << "\n";
            }
        } else {
            out << "# completion " << k << "\n" << render_iota(c, cs[k].almost);
        }
    }
    return kOk;
}

inline IotaSide side_for(const Input& in, LocalMode mode, const SearchOptions& s) {
    IotaSide side{in.complex, {}};
    for (auto& c : completions(in, s)) {
        if (mode == LocalMode::Almost)
            side.iotas.push_back(std::move(c.almost));
        else
            side.iotas.push_back(IotaData{std::move(c.lift), IotaMode::Full});
    }
    if (side.iotas.empty()) throw Failure{kInvalid, in.path + ": no iota is consistent with the complex and its pins"};
    return side;
}

inline int cmd_search_local(const Options& o, const std::string& a, const std::string& b, const std::string& mode,
                            std::ostream& out) {
    LocalMode m;
    if (mode == "almost")
        m = LocalMode::Almost;
    else if (mode == "local")
        m = LocalMode::Local;
    else
        throw Failure{kUsage, "--mode takes 'almost' or 'local'"};
    const Input ia = load(a), ib = load(b);
    const SearchOptions s = search_options(o);
    LocalSearchSpec spec{side_for(ia, m, s), side_for(ib, m, s), m, s, std::nullopt};
    const LocalCertificate cert = search_local_map(spec);
    const bool rec = records(o);
    auto header = [&] {
        std::ostringstream h;
        h << (rec ? "" : "# ") << "mode=" << to_string(cert.mode) << " cap=" << cert.cap
          << " required_cap=" << cert.required_cap << " definitive=" << (cert.definitive ? 1 : 0) << "\n";
        return h.str();
    };
    if (cert.found) {
        std::string text = "# " + std::string(to_string(m)) + " map " + ia.complex->name() + " -> " +
                           ib.complex->name() + " (source iota " + std::to_string(cert.source_iota) +
                           ", target iota " + std::to_string(cert.target_iota) + ")\n";
        text += render_map("f", *cert.map);
        if (cert.homotopy) text += render_map("J", *cert.homotopy);
        if (o.output.empty()) {
            out << (rec ? "result=found\n" + header() : text);
        } else {
            emit(o, out, text);
            out << (rec ? "result=found\n" : "found\n") << header();
        }
        return kOk;
    }
    out << (rec ? "result=none\n" : "no " + std::string(to_string(m)) + " map exists\n") << header();
    for (const auto& sd : cert.systems)
        out << (rec ? "" : "# ") << "source_iota=" << sd.source_iota << " target_iota=" << sd.target_iota
            << " unknowns=" << sd.unknowns << " equations=" << sd.equations << " rank=" << sd.rank << "\n";
    return cert.definitive ? kNone : kResource;
}

inline int cmd_connected(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    const SearchOptions s = search_options(o);
    const auto cs = completions(in, s);
    if (cs.empty()) throw Failure{kInvalid, path + ": no iota is consistent with the complex and its pins"};
    const ConnectedResult r = connected_complex(in.complex, cs[0].almost, s);
    emit(o, out,
         "# almost connected complex for iota completion 0 of " + std::to_string(cs.size()) + "\n" +
             render_complex(r.complex));
    return kOk;
}

inline int cmd_bound(const Options& o, const std::string& path, std::ostream& out) {
    const Input in = load(path);
    const SearchOptions s = search_options(o);
    const auto cs = completions(in, s);
    if (cs.empty()) throw Failure{kInvalid, path + ": no iota is consistent with the complex and its pins"};
    // The true iota is one of the completions, so only the minimum is a bound.
    int best = -1;
    for (const auto& c : cs) {
        const int b = concordance_unknotting_bound(in.complex, c.almost, s);
        best = best < 0 ? b : std::min(best, b);
    }
    if (records(o))
        out << "bound=" << best << " completions=" << cs.size() << "\n";
    else
        out << best << "\n";
    return kOk;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Involutive knot Floer complexes over F2[U,V]", "iknot"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool search) {
        sub->add_option("--format", o.format, "text or records")->check(CLI::IsMember({"text", "records"}));
        sub->add_option("-o,--output", o.output, "write the result to a file");
        if (search) {
            sub->add_option("--cap", o.cap, "exponent cap: auto or an integer");
            sub->add_option("--budget", o.budget, "maximum F2 unknowns and enumerated candidates");
        }
    };
    std::string knot, file_a, file_b, mode = "almost";
    int variant = 1;

    auto* build = app.add_subcommand("build", "write a builder complex");
    build->add_option("--knot", knot, "unknot, fig8 or cable:<n>")->required();
    common(build, false);
    auto one_file = [&](const char* name, const char* help, bool search) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("file", file_a, ".cfk input")->required();
        common(sub, search);
        return sub;
    };
    auto* validate_cmd = one_file("validate", "check d^2 = 0, the grading law and reducedness", false);
    auto* homology = one_file("homology", "HFK^- as an F2[U]-module", false);
    auto* torsion = one_file("torsion-order", "largest U-torsion order of HFK^-", false);
    auto* phipsi = one_file("phi-psi", "the maps Phi, Psi and Psi Phi", false);
    auto* dual = one_file("dual", "the dual complex", false);
    auto* iota_enum = one_file("iota-enum", "every almost iota with a lift", true);
    auto* connected = one_file("connected", "the almost connected complex", true);
    auto* bound = one_file("bound", "concordance unknotting number lower bound", true);
    auto* tensor_cmd = app.add_subcommand("tensor", "tensor product, with the product iota if pinned");
    tensor_cmd->add_option("a", file_a, "first factor")->required();
    tensor_cmd->add_option("b", file_b, "second factor")->required();
    tensor_cmd->add_option("--variant", variant, "product variant 1 or 2")->check(CLI::IsMember({1, 2}));
    common(tensor_cmd, true);
    auto* search = app.add_subcommand("search-local", "decide whether an (almost) local map exists");
    search->add_option("a", file_a, "source")->required();
    search->add_option("b", file_b, "target")->required();
    search->add_option("--mode", mode, "almost or local");
    common(search, true);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (build->parsed()) return cmd_build(o, knot, out);
        if (validate_cmd->parsed()) return cmd_validate(o, file_a, out);
        if (homology->parsed()) return cmd_homology(o, file_a, out);
        if (torsion->parsed()) return cmd_torsion_order(o, file_a, out);
        if (phipsi->parsed()) return cmd_phi_psi(o, file_a, out);
        if (dual->parsed()) return cmd_dual(o, file_a, out);
        if (iota_enum->parsed()) return cmd_iota_enum(o, file_a, out);
        if (connected->parsed()) return cmd_connected(o, file_a, out);
        if (bound->parsed()) return cmd_bound(o, file_a, out);
        if (tensor_cmd->parsed()) return cmd_tensor(o, file_a, file_b, variant, out);
        if (search->parsed()) return cmd_search_local(o, file_a, file_b, mode, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return kResource;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}

}  // namespace iknot::cli
