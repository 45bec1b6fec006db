#ifndef MBLAB_MBLAB_H
#define MBLAB_MBLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MBL_BUILDING_LIBRARY)
#    define MBL_API __declspec(dllexport)
#  else
#    define MBL_API __declspec(dllimport)
#  endif
#else
#  define MBL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mbl_status {
  MBL_OK = 0,
  MBL_ERR_INVALID_ARGUMENT = 1,
  MBL_ERR_OUT_OF_RANGE = 2,
  MBL_ERR_DIMENSION = 3,
  MBL_ERR_DIMENSION_CAP = 4,
  MBL_ERR_NOT_HERMITIAN = 5,
  MBL_ERR_NO_CONVERGENCE = 6,
  MBL_ERR_IO = 7,
  MBL_ERR_CACHE = 8,
  MBL_ERR_INSUFFICIENT_DATA = 9,
  MBL_ERR_INTERNAL = 10
} mbl_status;

typedef struct mbl_model mbl_model;
typedef struct mbl_operator mbl_operator;
typedef struct mbl_eigensystem mbl_eigensystem;
typedef struct mbl_mps mbl_mps;

/* Message of the last failed call on this thread; empty after success. */
MBL_API const char* mbl_last_error(void);
MBL_API const char* mbl_version(void);
MBL_API const char* mbl_status_string(mbl_status status);

/* Models. kind is "heisenberg" or "ising"; fields are drawn uniformly from
   [-h, h] with the given seed. */
MBL_API mbl_status mbl_model_create(const char* kind, int n_sites, double h, uint64_t seed,
                                    mbl_model** out);
MBL_API void mbl_model_free(mbl_model* model);
MBL_API mbl_status mbl_model_fields(const mbl_model* model, double* fields, size_t capacity);
MBL_API mbl_status mbl_model_assemble(const mbl_model* model, size_t max_dim, mbl_operator** out);

/* Operators on the full chain, row-major interleaved (re, im) storage. */
MBL_API mbl_status mbl_pauli(int site, char axis, int n_sites, mbl_operator** out);
MBL_API void mbl_operator_free(mbl_operator* op);
MBL_API size_t mbl_operator_dim(const mbl_operator* op);
MBL_API mbl_status mbl_operator_entries(const mbl_operator* op, double* re_im, size_t capacity);

/* Spectra. */
MBL_API mbl_status mbl_diagonalize(const mbl_operator* h, mbl_eigensystem** out);
MBL_API void mbl_eigensystem_free(mbl_eigensystem* eig);
MBL_API size_t mbl_eigensystem_dim(const mbl_eigensystem* eig);
MBL_API mbl_status mbl_eigensystem_energies(const mbl_eigensystem* eig, double* energies,
                                            size_t capacity);
MBL_API mbl_status mbl_eigensystem_save(const mbl_eigensystem* eig, const char* path,
                                        int n_sites, uint64_t seed, double h);
MBL_API mbl_status mbl_eigensystem_load(const char* path, int n_sites, uint64_t seed, double h,
                                        mbl_eigensystem** out);
MBL_API mbl_status mbl_check_ai(const mbl_eigensystem* eig, double tol, double* gamma,
                                int* holds);
MBL_API mbl_status mbl_idos(const mbl_eigensystem* eig, double energy, size_t* count);

/* Dynamics, filters and clustering. */
MBL_API mbl_status mbl_truncation_probe(const mbl_model* model, const mbl_operator* a, int l,
                                        double t, double* value);
MBL_API mbl_status mbl_commutator_probe(const mbl_operator* a, const mbl_operator* b,
                                        const mbl_eigensystem* eig, double t, double* value);
MBL_API mbl_status mbl_gaussian_filter(const mbl_operator* a, const mbl_eigensystem* eig,
                                       double alpha, mbl_operator** out);
MBL_API mbl_status mbl_connected_correlator(const mbl_eigensystem* eig, size_t k,
                                            const mbl_operator* a, const mbl_operator* b,
                                            double* value);

/* Matrix-product states. state is interleaved (re, im) of length 2 * 2^n. */
MBL_API mbl_status mbl_dense_to_mps(const double* state_re_im, int n_sites, int max_bond,
                                    double weight_threshold, mbl_mps** out);
MBL_API void mbl_mps_free(mbl_mps* mps);
MBL_API mbl_status mbl_mps_fidelity(const mbl_mps* mps, const double* state_re_im,
                                    double* fidelity);
MBL_API mbl_status mbl_mps_discarded(const mbl_mps* mps, double* discarded);
MBL_API mbl_status mbl_mps_export(const mbl_mps* mps, const char* path);
MBL_API mbl_status mbl_entanglement_entropy(const double* state_re_im, int n_sites, int cut,
                                            double* entropy);

/* Experiments. config_json holds an "experiment" name plus parameters. On
   success *manifest_json (if non-null) receives the run manifest, to be
   released with mbl_string_free. */
MBL_API mbl_status mbl_run_experiment(const char* config_json, char** manifest_json);
MBL_API mbl_status mbl_emit_plotdata(const char* csv_path, const char* group_by,
                                     const char* value_column, const char* filter,
                                     const char* out_path, size_t* groups);
MBL_API void mbl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
