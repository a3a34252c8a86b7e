#include "fitzop/fitzop.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_file(const std::string& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

int report_error(const char* what, fzp_status s) {
    std::cerr << "fitzop: " << what << ": " << fzp_status_name(s) << ": " << fzp_last_error() << "\n";
    return 2;
}

// Writes an owned result string and frees it.
int emit(const std::string& path, char* text, int code) {
    const bool ok = write_file(path, text);
    fzp_string_free(text);
    if (!ok) {
        std::cerr << "fitzop: cannot write " << path << "\n";
        return 2;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitzpatrick and Penot functions of sampled monotone operators"};
    app.require_subcommand(1);

    std::string spec_path, out_path, gallery_name, fn;
    std::size_t resolution = 41;

    auto* classify = app.add_subcommand("classify", "check the properties listed in a spec file");
    classify->add_option("--spec", spec_path, "spec file")->required();
    classify->add_option("--out", out_path, "report file")->required();

    auto* gallery = app.add_subcommand("gallery", "run the built-in example scenarios");
    gallery->add_option("--name", gallery_name, "scenario name or 'all'")->required();
    gallery->add_option("--out", out_path, "report file")->required();

    auto* exp = app.add_subcommand("export", "write phi or psi on a grid as CSV");
    exp->add_option("--spec", spec_path, "spec file")->required();
    exp->add_option("--fn", fn, "phi or psi")->required()->check(CLI::IsMember({"phi", "psi"}));
    exp->add_option("--grid", resolution, "lattice points per axis")->check(CLI::Range(2, 100000));
    exp->add_option("--out", out_path, "CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string spec_text;
    if ((classify->parsed() || exp->parsed()) && !read_file(spec_path, spec_text)) {
        std::cerr << "fitzop: cannot read " << spec_path << "\n";
        return 2;
    }

    if (classify->parsed()) {
        char* report = nullptr;
        int code = 2;
        const fzp_status s = fzp_classify(spec_text.c_str(), &report, &code);
        if (s != FZP_OK) return report_error("classify", s);
        return emit(out_path, report, code);
    }
    if (gallery->parsed()) {
        char* report = nullptr;
        int all_passed = 0;
        const fzp_status s = fzp_gallery(gallery_name.c_str(), &report, &all_passed);
        if (s != FZP_OK) return report_error("gallery", s);
        return emit(out_path, report, all_passed ? 0 : 1);
    }
    char* csv = nullptr;
    const fzp_status s = fzp_export(spec_text.c_str(), fn.c_str(), resolution, &csv);
    if (s != FZP_OK) return report_error("export", s);
    return emit(out_path, csv, 0);
}
