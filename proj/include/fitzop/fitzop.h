#ifndef FITZOP_FITZOP_H
#define FITZOP_FITZOP_H

#include <stddef.h>

#if defined(_WIN32)
#define FZP_API __declspec(dllexport)
#else
#define FZP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fzp_status {
    FZP_OK = 0,
    FZP_ERR_INVALID_ARGUMENT = 1,
    FZP_ERR_DIMENSION = 2,
    FZP_ERR_PARSE = 3,
    FZP_ERR_HYPOTHESIS = 4,
    FZP_ERR_NOT_REPRESENTATIVE = 5,
    FZP_ERR_LP = 6,
    FZP_ERR_INTERNAL = 7
} fzp_status;

typedef struct fzp_operator fzp_operator;

/* Message of the last failed call on this thread; "" if none. */
FZP_API const char* fzp_last_error(void);
FZP_API const char* fzp_status_name(fzp_status s);

/* Builds the operator described by the `operator:` block of a spec text. */
FZP_API fzp_status fzp_operator_from_spec(const char* spec_text, fzp_operator** out);
FZP_API void fzp_operator_free(fzp_operator* op);
FZP_API fzp_status fzp_operator_dim(const fzp_operator* op, size_t* out);
/* Caller frees with fzp_string_free. */
FZP_API fzp_status fzp_operator_describe(const fzp_operator* op, char** out);

/* region is a region literal; NULL means the whole space. Infinite results
   are returned as +-HUGE_VAL. approximate may be NULL. */
FZP_API fzp_status fzp_phi(const fzp_operator* op, const char* region, const double* x, const double* xstar,
                           double* out, int* approximate);
FZP_API fzp_status fzp_psi(const fzp_operator* op, const char* region, const double* x, const double* xstar,
                           double* out, int* approximate);
FZP_API fzp_status fzp_mr(const fzp_operator* op, const char* region, const double* x, const double* xstar,
                          int* out);

/* Report texts; the caller frees them with fzp_string_free. exit_code follows
   the CLI contract: 0 all pass, 1 verdict false, 2 parse or gate error. */
FZP_API fzp_status fzp_classify(const char* spec_text, char** report, int* exit_code);
FZP_API fzp_status fzp_gallery(const char* name, char** report, int* all_passed);
/* fn is "phi" or "psi". */
FZP_API fzp_status fzp_export(const char* spec_text, const char* fn, size_t resolution, char** csv);

FZP_API void fzp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
