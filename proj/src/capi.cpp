#include "fitzop/fitzop.h"

#include "fitzop/fitzpatrick.hpp"
#include "fitzop/gallery.hpp"
#include "fitzop/report.hpp"
#include "fitzop/spec.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct fzp_operator {
    fitzop::OperatorHandle op;
};

namespace {

thread_local std::string g_last_error;

fzp_status fail(fzp_status s, const char* msg) {
    g_last_error = msg;
    return s;
}

// Maps exceptions from the core onto status codes.
template <class F>
fzp_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return FZP_OK;
    } catch (const fitzop::ParseError& e) {
        return fail(FZP_ERR_PARSE, e.what());
    } catch (const fitzop::DimensionError& e) {
        return fail(FZP_ERR_DIMENSION, e.what());
    } catch (const fitzop::UnsatisfiedHypothesis& e) {
        return fail(FZP_ERR_HYPOTHESIS, e.what());
    } catch (const fitzop::NotRepresentativeClass& e) {
        return fail(FZP_ERR_NOT_REPRESENTATIVE, e.what());
    } catch (const fitzop::LpFailure& e) {
        return fail(FZP_ERR_LP, e.what());
    } catch (const fitzop::Error& e) {
        return fail(FZP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FZP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FZP_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fitzop::Region region_arg(const fzp_operator* op, const char* region) {
    const std::size_t n = op->op->dim();
    return region ? fitzop::parse_region(region, n) : fitzop::Region::whole(n);
}

fitzop::PrimalDualPoint point_arg(const fzp_operator* op, const double* x, const double* xstar) {
    const std::size_t n = op->op->dim();
    return {fitzop::Vector(x, x + n), fitzop::Vector(xstar, xstar + n)};
}

}  // namespace

extern "C" {

const char* fzp_last_error(void) { return g_last_error.c_str(); }

const char* fzp_status_name(fzp_status s) {
    switch (s) {
    case FZP_OK: return "ok";
    case FZP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FZP_ERR_DIMENSION: return "dimension mismatch";
    case FZP_ERR_PARSE: return "parse error";
    case FZP_ERR_HYPOTHESIS: return "unsatisfied hypothesis";
    case FZP_ERR_NOT_REPRESENTATIVE: return "not a representative-class function";
    case FZP_ERR_LP: return "LP failure";
    case FZP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

fzp_status fzp_operator_from_spec(const char* spec_text, fzp_operator** out) {
    if (!spec_text || !out) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        fitzop::ParsedSpec s = fitzop::parse_spec(spec_text);
        *out = new fzp_operator{std::move(s.op)};
    });
}

void fzp_operator_free(fzp_operator* op) { delete op; }

fzp_status fzp_operator_dim(const fzp_operator* op, size_t* out) {
    if (!op || !out) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    *out = op->op->dim();
    return FZP_OK;
}

fzp_status fzp_operator_describe(const fzp_operator* op, char** out) {
    if (!op || !out) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(op->op->describe()); });
}

fzp_status fzp_phi(const fzp_operator* op, const char* region, const double* x, const double* xstar, double* out,
                   int* approximate) {
    if (!op || !x || !xstar || !out) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto v = fitzop::phi_eval(op->op, region_arg(op, region), point_arg(op, x, xstar));
        *out = v.value.value();
        if (approximate) *approximate = v.approximate ? 1 : 0;
    });
}

fzp_status fzp_psi(const fzp_operator* op, const char* region, const double* x, const double* xstar, double* out,
                   int* approximate) {
    if (!op || !x || !xstar || !out) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto v = fitzop::psi_eval(op->op, region_arg(op, region), point_arg(op, x, xstar));
        *out = v.value.value();
        if (approximate) *approximate = v.approximate ? 1 : 0;
    });
}

fzp_status fzp_mr(const fzp_operator* op, const char* region, const double* x, const double* xstar, int* out) {
    if (!op || !x || !xstar || !out) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = fitzop::mr_test(op->op, region_arg(op, region), point_arg(op, x, xstar), fitzop::Tolerance{}) ? 1 : 0;
    });
}

fzp_status fzp_classify(const char* spec_text, char** report, int* exit_code) {
    if (!spec_text || !report || !exit_code) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    *report = nullptr;
    return guarded([&] {
        const fitzop::ClassifyOutcome r = fitzop::run_classify(spec_text);
        *report = dup_string(r.report);
        *exit_code = r.exit_code;
    });
}

fzp_status fzp_gallery(const char* name, char** report, int* all_passed) {
    if (!name || !report || !all_passed) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    *report = nullptr;
    return guarded([&] {
        const fitzop::GalleryResult r = fitzop::run_gallery(name);
        *report = dup_string(r.report);
        *all_passed = r.all_passed() ? 1 : 0;
    });
}

fzp_status fzp_export(const char* spec_text, const char* fn, size_t resolution, char** csv) {
    if (!spec_text || !fn || !csv) return fail(FZP_ERR_INVALID_ARGUMENT, "null argument");
    *csv = nullptr;
    return guarded([&] { *csv = dup_string(fitzop::export_csv(spec_text, fn, resolution)); });
}

void fzp_string_free(char* s) { std::free(s); }

}  // extern "C"
