#include "mblab/mblab.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "core/cache.hpp"
#include "core/correlations.hpp"
#include "core/dynamics.hpp"
#include "core/error.hpp"
#include "core/filters.hpp"
#include "core/harness.hpp"
#include "core/model.hpp"
#include "core/mps.hpp"
#include "core/spectral.hpp"

struct mbl_model {
  mbl::ChainModel model;
};
struct mbl_operator {
  mbl::DenseOperator op;
};
struct mbl_eigensystem {
  mbl::EigenSystem eig;
};
struct mbl_mps {
  mbl::MpsState state;
};

namespace {

thread_local std::string g_last_error;

mbl_status to_status(mbl::ErrorCode code) {
  switch (code) {
    case mbl::ErrorCode::InvalidArgument: return MBL_ERR_INVALID_ARGUMENT;
    case mbl::ErrorCode::OutOfRange: return MBL_ERR_OUT_OF_RANGE;
    case mbl::ErrorCode::DimensionMismatch: return MBL_ERR_DIMENSION;
    case mbl::ErrorCode::DimensionCap: return MBL_ERR_DIMENSION_CAP;
    case mbl::ErrorCode::NotHermitian: return MBL_ERR_NOT_HERMITIAN;
    case mbl::ErrorCode::NoConvergence: return MBL_ERR_NO_CONVERGENCE;
    case mbl::ErrorCode::Io: return MBL_ERR_IO;
    case mbl::ErrorCode::CacheCorrupt: return MBL_ERR_CACHE;
    case mbl::ErrorCode::InsufficientData: return MBL_ERR_INSUFFICIENT_DATA;
    case mbl::ErrorCode::Internal: return MBL_ERR_INTERNAL;
  }
  return MBL_ERR_INTERNAL;
}

template <typename F>
mbl_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return MBL_OK;
  } catch (const mbl::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return MBL_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MBL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MBL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  mbl::require(p != nullptr, mbl::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

mbl::Vec read_state(const double* re_im, int n_sites) {
  need(re_im, "state");
  mbl::require(n_sites >= 1 && n_sites <= 30, mbl::ErrorCode::OutOfRange, "n_sites out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  mbl::Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = mbl::cplx(re_im[2 * i], re_im[2 * i + 1]);
  return v;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mbl_last_error(void) { return g_last_error.c_str(); }
const char* mbl_version(void) { return mbl::kVersion; }

const char* mbl_status_string(mbl_status status) {
  switch (status) {
    case MBL_OK: return "ok";
    case MBL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MBL_ERR_OUT_OF_RANGE: return "out of range";
    case MBL_ERR_DIMENSION: return "dimension mismatch";
    case MBL_ERR_DIMENSION_CAP: return "dimension cap exceeded";
    case MBL_ERR_NOT_HERMITIAN: return "not hermitian";
    case MBL_ERR_NO_CONVERGENCE: return "no convergence";
    case MBL_ERR_IO: return "i/o error";
    case MBL_ERR_CACHE: return "cache corrupt";
    case MBL_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case MBL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

mbl_status mbl_model_create(const char* kind, int n_sites, double h, uint64_t seed,
                            mbl_model** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    *out = new mbl_model{mbl::build_model(kind, n_sites, h, seed)};
  });
}

void mbl_model_free(mbl_model* model) { delete model; }

mbl_status mbl_model_fields(const mbl_model* model, double* fields, size_t capacity) {
  return guarded([&] {
    need(model, "model");
    need(fields, "fields");
    const auto& f = model->model.fields_z;
    mbl::require(capacity >= f.size(), mbl::ErrorCode::DimensionMismatch, "buffer too small");
    std::copy(f.begin(), f.end(), fields);
  });
}

mbl_status mbl_model_assemble(const mbl_model* model, size_t max_dim, mbl_operator** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new mbl_operator{mbl::assemble(model->model, max_dim == 0 ? mbl::kDefaultMaxDim : max_dim)};
  });
}

mbl_status mbl_pauli(int site, char axis, int n_sites, mbl_operator** out) {
  return guarded([&] {
    need(out, "out");
    *out = new mbl_operator{mbl::build_pauli(site, mbl::parse_axis(axis), n_sites)};
  });
}

void mbl_operator_free(mbl_operator* op) { delete op; }

size_t mbl_operator_dim(const mbl_operator* op) {
  return op ? static_cast<size_t>(op->op.entries.rows()) : 0;
}

mbl_status mbl_operator_entries(const mbl_operator* op, double* re_im, size_t capacity) {
  return guarded([&] {
    need(op, "operator");
    need(re_im, "buffer");
    const auto& m = op->op.entries;
    const auto dim = static_cast<size_t>(m.rows());
    mbl::require(capacity >= 2 * dim * dim, mbl::ErrorCode::DimensionMismatch, "buffer too small");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const size_t i = 2 * (static_cast<size_t>(r) * dim + static_cast<size_t>(c));
        re_im[i] = m(r, c).real();
        re_im[i + 1] = m(r, c).imag();
      }
  });
}

mbl_status mbl_diagonalize(const mbl_operator* h, mbl_eigensystem** out) {
  return guarded([&] {
    need(h, "hamiltonian");
    need(out, "out");
    *out = new mbl_eigensystem{mbl::diagonalize(h->op)};
  });
}

void mbl_eigensystem_free(mbl_eigensystem* eig) { delete eig; }

size_t mbl_eigensystem_dim(const mbl_eigensystem* eig) {
  return eig ? static_cast<size_t>(eig->eig.dim()) : 0;
}

mbl_status mbl_eigensystem_energies(const mbl_eigensystem* eig, double* energies,
                                    size_t capacity) {
  return guarded([&] {
    need(eig, "eigensystem");
    need(energies, "buffer");
    const auto& e = eig->eig.energies;
    mbl::require(capacity >= static_cast<size_t>(e.size()), mbl::ErrorCode::DimensionMismatch,
                 "buffer too small");
    std::copy(e.data(), e.data() + e.size(), energies);
  });
}

mbl_status mbl_eigensystem_save(const mbl_eigensystem* eig, const char* path, int n_sites,
                                uint64_t seed, double h) {
  return guarded([&] {
    need(eig, "eigensystem");
    need(path, "path");
    mbl::save_eigensystem(path, eig->eig, {static_cast<std::uint32_t>(n_sites), seed, h});
  });
}

mbl_status mbl_eigensystem_load(const char* path, int n_sites, uint64_t seed, double h,
                                mbl_eigensystem** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new mbl_eigensystem{
        mbl::load_eigensystem(path, {static_cast<std::uint32_t>(n_sites), seed, h})};
  });
}

mbl_status mbl_check_ai(const mbl_eigensystem* eig, double tol, double* gamma, int* holds) {
  return guarded([&] {
    need(eig, "eigensystem");
    const auto r = mbl::check_assumption_ai(eig->eig, tol);
    if (gamma) *gamma = r.gamma;
    if (holds) *holds = r.holds ? 1 : 0;
  });
}

mbl_status mbl_idos(const mbl_eigensystem* eig, double energy, size_t* count) {
  return guarded([&] {
    need(eig, "eigensystem");
    need(count, "count");
    *count = mbl::idos(eig->eig, energy);
  });
}

mbl_status mbl_truncation_probe(const mbl_model* model, const mbl_operator* a, int l, double t,
                                double* value) {
  return guarded([&] {
    need(model, "model");
    need(a, "operator");
    need(value, "value");
    *value = mbl::truncation_probe(model->model, a->op, l, t);
  });
}

mbl_status mbl_commutator_probe(const mbl_operator* a, const mbl_operator* b,
                                const mbl_eigensystem* eig, double t, double* value) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(eig, "eigensystem");
    need(value, "value");
    *value = mbl::commutator_probe(a->op, b->op, eig->eig, t);
  });
}

mbl_status mbl_gaussian_filter(const mbl_operator* a, const mbl_eigensystem* eig, double alpha,
                               mbl_operator** out) {
  return guarded([&] {
    need(a, "operator");
    need(eig, "eigensystem");
    need(out, "out");
    *out = new mbl_operator{mbl::gaussian_filter(a->op, eig->eig, alpha)};
  });
}

mbl_status mbl_connected_correlator(const mbl_eigensystem* eig, size_t k, const mbl_operator* a,
                                    const mbl_operator* b, double* value) {
  return guarded([&] {
    need(eig, "eigensystem");
    need(a, "a");
    need(b, "b");
    need(value, "value");
    *value = mbl::connected_correlator(static_cast<Eigen::Index>(k), a->op, b->op, eig->eig);
  });
}

mbl_status mbl_dense_to_mps(const double* state_re_im, int n_sites, int max_bond,
                            double weight_threshold, mbl_mps** out) {
  return guarded([&] {
    need(out, "out");
    const mbl::Vec psi = read_state(state_re_im, n_sites);
    *out = new mbl_mps{mbl::dense_to_mps(psi, n_sites, {max_bond, weight_threshold})};
  });
}

void mbl_mps_free(mbl_mps* mps) { delete mps; }

mbl_status mbl_mps_fidelity(const mbl_mps* mps, const double* state_re_im, double* fidelity) {
  return guarded([&] {
    need(mps, "mps");
    need(fidelity, "fidelity");
    *fidelity = mbl::mps_fidelity(mps->state, read_state(state_re_im, mps->state.n_sites));
  });
}

mbl_status mbl_mps_discarded(const mbl_mps* mps, double* discarded) {
  return guarded([&] {
    need(mps, "mps");
    need(discarded, "discarded");
    *discarded = mps->state.total_discarded();
  });
}

mbl_status mbl_mps_export(const mbl_mps* mps, const char* path) {
  return guarded([&] {
    need(mps, "mps");
    need(path, "path");
    mbl::export_mps(mps->state, path);
  });
}

mbl_status mbl_entanglement_entropy(const double* state_re_im, int n_sites, int cut,
                                    double* entropy) {
  return guarded([&] {
    need(entropy, "entropy");
    *entropy = mbl::entanglement_entropy(read_state(state_re_im, n_sites), cut);
  });
}

mbl_status mbl_run_experiment(const char* config_json, char** manifest_json) {
  return guarded([&] {
    need(config_json, "config");
    const auto config = mbl::config_from_json(nlohmann::json::parse(config_json));
    const auto out = mbl::run_experiment(config);
    if (manifest_json) *manifest_json = dup_string(out.manifest.dump(2));
  });
}

mbl_status mbl_emit_plotdata(const char* csv_path, const char* group_by, const char* value_column,
                             const char* filter, const char* out_path, size_t* groups) {
  return guarded([&] {
    need(csv_path, "csv_path");
    need(group_by, "group_by");
    need(out_path, "out_path");
    const auto t = mbl::emit_plotdata(csv_path, group_by, value_column ? value_column : "value",
                                      filter ? filter : "", out_path);
    if (groups) *groups = t.rows.size();
  });
}

void mbl_string_free(char* s) { delete[] s; }

}  // extern "C"
