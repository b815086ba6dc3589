#pragma once

// Command-line front end. Every subcommand builds the same JSON request the HTTP
// service receives and prints the handler's payload.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kaleido/http.hpp"
#include "kaleido/service.hpp"

namespace kaleido::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConstruction = 3;

inline int exit_code(const service::Response& r) {
    if (r.status == 200) return kExitOk;
    if (r.status == 422) return kExitConstruction;
    return kExitValidation;
}

namespace detail {

inline int emit(const service::Response& r, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
    if (!r.ok()) {
        err << to_text(r.body, 2) << "\n";
        return exit_code(r);
    }
    const std::string text = r.svg.empty() ? to_text(r.body, 2) + "\n" : r.svg;
    if (out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "cannot write " << out_path << "\n";
            return kExitValidation;
        }
        f << text;
    }
    return kExitOk;
}

inline void print_classification(const Json& b, std::ostream& out) {
    out << "notation=" << b["notation"].get<std::string>() << "\n"
        << "canonical=" << b["canonical"].get<std::string>() << "\n"
        << "kind=" << b["kind"].get<std::string>() << "\n"
        << "chi=" << b["euler_char"]["text"].get<std::string>() << "\n"
        << "is_orbifold=" << (b["is_orbifold"].get<bool>() ? "true" : "false") << "\n"
        << "is_bad=" << (b["is_bad"].get<bool>() ? "true" : "false") << "\n"
        << "is_realizable=" << (b["is_realizable"].get<bool>() ? "true" : "false") << "\n";
    if (b.contains("free_variables")) out << "free_variables=" << b["free_variables"]["count"].get<int>() << "\n";
}

} // namespace detail

/// Runs one command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"Kaleidoscopic orbifold construction, covers and rendering"};
    app.require_subcommand(1);

    bool json_out = false;
    std::string notation;
    std::vector<double> free_vars;
    std::string out_path;

    auto* c_classify = app.add_subcommand("classify", "Classify a notation");
    c_classify->add_option("notation", notation, "Orbifold notation such as *236")->required();
    c_classify->add_flag("--json", json_out, "Print the JSON record");

    int walls = 5, max_order = 6;
    auto* c_enum = app.add_subcommand("enumerate", "List good orbifolds with N walls");
    c_enum->add_option("--walls", walls, "Number of walls")->required();
    c_enum->add_option("--max-order", max_order, "Largest corner order")->required();
    c_enum->add_flag("--json", json_out, "Print the JSON record");

    auto* c_build = app.add_subcommand("build", "Construct the fundamental polygon");
    c_build->add_option("notation", notation, "Orbifold notation (default *22222)");
    c_build->add_option("--free", free_vars, "Free variables, comma separated")->delimiter(',');
    c_build->add_option("--out", out_path, "Output file");

    CoverOptions opts;
    std::string emphasis, format = "tiling";
    std::vector<double> attenuations;
    double viewport = 3.0;
    auto* c_cover = app.add_subcommand("cover", "Generate and export the universal cover");
    c_cover->add_option("notation", notation, "Orbifold notation (default *22222)");
    c_cover->add_option("--free", free_vars, "Free variables, comma separated")->delimiter(',');
    c_cover->add_option("--max-depth", opts.max_depth, "Reflection depth limit");
    c_cover->add_option("--max-copies", opts.max_copies, "Copy count limit");
    c_cover->add_option("--min-diameter", opts.min_diameter, "Hyperbolic copy size cutoff");
    c_cover->add_option("--emphasis", emphasis, "orbifold | translational | universal | custom");
    c_cover->add_option("--attenuation", attenuations, "Per-mirror attenuations, comma separated")
        ->delimiter(',');
    c_cover->add_option("--viewport-radius", viewport, "Spherical clip radius");
    c_cover->add_option("--format", format, "svg | tiling")->check(CLI::IsMember({"svg", "tiling"}));
    c_cover->add_option("--out", out_path, "Output file");

    int port = 8080;
    std::string host = "127.0.0.1";
    auto* c_serve = app.add_subcommand("serve", "Run the HTTP service");
    c_serve->add_option("--port", port, "Port");
    c_serve->add_option("--host", host, "Bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitValidation;
    }

    Json req = Json::object();
    if (!notation.empty()) req["notation"] = notation;
    if (!free_vars.empty()) req["free_vars"] = free_vars;

    if (c_classify->parsed()) {
        const service::Response r = service::classify(req);
        if (r.ok() && !json_out) {
            detail::print_classification(r.body, out);
            return kExitOk;
        }
        return detail::emit(r, "", out, err);
    }
    if (c_enum->parsed()) {
        const service::Response r = service::enumerate(Json{{"walls", walls}, {"max_order", max_order}});
        if (r.ok() && !json_out) {
            for (const auto& o : r.body["orbifolds"])
                out << o["notation"].get<std::string>() << " " << o["kind"].get<std::string>() << " "
                    << o["euler_char"].get<std::string>() << "\n";
            return kExitOk;
        }
        return detail::emit(r, "", out, err);
    }
    if (c_build->parsed()) return detail::emit(service::build(req), out_path, out, err);
    if (c_cover->parsed()) {
        req["options"] = Json{{"max_depth", opts.max_depth},
                              {"max_copies", opts.max_copies},
                              {"min_diameter", opts.min_diameter}};
        Json style = Json{{"viewport_radius", viewport}};
        if (!emphasis.empty()) style["emphasis"] = emphasis;
        if (!attenuations.empty()) style["attenuations"] = attenuations;
        req["style"] = style;
        req["format"] = format;
        return detail::emit(service::cover(req), out_path, out, err);
    }
    if (c_serve->parsed()) {
        httplib::Server server;
        service::install_routes(server);
        out << "listening on http://" << host << ":" << port << std::endl;
        if (!server.listen(host, port)) {
            err << "cannot listen on " << host << ":" << port << "\n";
            return kExitValidation;
        }
        return kExitOk;
    }
    return kExitValidation;
}

} // namespace kaleido::cli
