#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mblab/mblab.h"

TEST(CApi, ModelDiagonalizeAndEnergies) {
  mbl_model* model = nullptr;
  ASSERT_EQ(mbl_model_create("heisenberg", 2, 0.0, 1, &model), MBL_OK);
  mbl_operator* h = nullptr;
  ASSERT_EQ(mbl_model_assemble(model, 0, &h), MBL_OK);
  EXPECT_EQ(mbl_operator_dim(h), 4u);
  mbl_eigensystem* eig = nullptr;
  ASSERT_EQ(mbl_diagonalize(h, &eig), MBL_OK);
  std::vector<double> e(4);
  ASSERT_EQ(mbl_eigensystem_energies(eig, e.data(), e.size()), MBL_OK);
  EXPECT_NEAR(e[0], -3.0, 1e-13);
  EXPECT_NEAR(e[3], 1.0, 1e-13);
  EXPECT_EQ(mbl_eigensystem_energies(eig, e.data(), 2), MBL_ERR_DIMENSION);
  EXPECT_NE(std::string(mbl_last_error()), "");
  double gamma = -1;
  int holds = -1;
  ASSERT_EQ(mbl_check_ai(eig, 1e-10, &gamma, &holds), MBL_OK);
  EXPECT_EQ(holds, 0);
  size_t count = 0;
  ASSERT_EQ(mbl_idos(eig, 1.0, &count), MBL_OK);
  EXPECT_EQ(count, 4u);
  mbl_eigensystem_free(eig);
  mbl_operator_free(h);
  mbl_model_free(model);
}

TEST(CApi, ErrorsAreCodes) {
  mbl_model* model = nullptr;
  EXPECT_EQ(mbl_model_create("potts", 4, 1.0, 1, &model), MBL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(model, nullptr);
  mbl_operator* op = nullptr;
  EXPECT_EQ(mbl_pauli(3, 'X', 2, &op), MBL_ERR_OUT_OF_RANGE);
  EXPECT_EQ(mbl_diagonalize(nullptr, nullptr), MBL_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(mbl_status_string(MBL_ERR_CACHE), "cache corrupt");
  EXPECT_EQ(mbl_run_experiment("{not json", nullptr), MBL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ProbesAndFilters) {
  mbl_model* model = nullptr;
  ASSERT_EQ(mbl_model_create("ising", 4, 2.0, 3, &model), MBL_OK);
  mbl_operator *h = nullptr, *x0 = nullptr, *z3 = nullptr, *f = nullptr;
  ASSERT_EQ(mbl_model_assemble(model, 0, &h), MBL_OK);
  ASSERT_EQ(mbl_pauli(0, 'X', 4, &x0), MBL_OK);
  ASSERT_EQ(mbl_pauli(3, 'Z', 4, &z3), MBL_OK);
  mbl_eigensystem* eig = nullptr;
  ASSERT_EQ(mbl_diagonalize(h, &eig), MBL_OK);
  double v = -1;
  ASSERT_EQ(mbl_truncation_probe(model, x0, 1, 5.0, &v), MBL_OK);
  EXPECT_LE(v, 1e-10);
  ASSERT_EQ(mbl_commutator_probe(x0, z3, eig, 2.0, &v), MBL_OK);
  EXPECT_LE(v, 1e-10);
  ASSERT_EQ(mbl_connected_correlator(eig, 0, x0, z3, &v), MBL_OK);
  EXPECT_LE(v, 1e-12);
  ASSERT_EQ(mbl_gaussian_filter(x0, eig, 1.0, &f), MBL_OK);
  std::vector<double> buf(2 * 16 * 16);
  ASSERT_EQ(mbl_operator_entries(f, buf.data(), buf.size()), MBL_OK);
  const auto path = (std::filesystem::temp_directory_path() / "mblab_capi.mblc").string();
  ASSERT_EQ(mbl_eigensystem_save(eig, path.c_str(), 4, 3, 2.0), MBL_OK);
  mbl_eigensystem* back = nullptr;
  ASSERT_EQ(mbl_eigensystem_load(path.c_str(), 4, 3, 2.0, &back), MBL_OK);
  EXPECT_EQ(mbl_eigensystem_load(path.c_str(), 4, 4, 2.0, &back), MBL_ERR_CACHE);
  mbl_eigensystem_free(back);
  std::filesystem::remove(path);
  for (auto* o : {h, x0, z3, f}) mbl_operator_free(o);
  mbl_eigensystem_free(eig);
  mbl_model_free(model);
}

TEST(CApi, MpsRoundTrip) {
  std::vector<double> psi(2 * 16, 0.0);
  for (int i = 0; i < 16; ++i) psi[2 * static_cast<std::size_t>(i)] = 0.25;
  mbl_mps* mps = nullptr;
  ASSERT_EQ(mbl_dense_to_mps(psi.data(), 4, 0, 0.0, &mps), MBL_OK);
  double fid = 0, disc = -1, s = -1;
  ASSERT_EQ(mbl_mps_fidelity(mps, psi.data(), &fid), MBL_OK);
  EXPECT_NEAR(fid, 1.0, 1e-12);
  ASSERT_EQ(mbl_mps_discarded(mps, &disc), MBL_OK);
  EXPECT_LE(disc, 1e-20);
  ASSERT_EQ(mbl_entanglement_entropy(psi.data(), 4, 2, &s), MBL_OK);
  EXPECT_NEAR(s, 0.0, 1e-12);
  mbl_mps_free(mps);
}

TEST(CApi, RunExperiment) {
  const auto out = std::filesystem::temp_directory_path() / "mblab_capi_run";
  std::filesystem::remove_all(out);
  nlohmann::json cfg{{"experiment", "spectrum"}, {"n", 4}, {"h", 1.0}, {"realizations", 2}, {"out", out.string()}};
  char* manifest = nullptr;
  ASSERT_EQ(mbl_run_experiment(cfg.dump().c_str(), &manifest), MBL_OK) << mbl_last_error();
  const auto j = nlohmann::json::parse(manifest);
  mbl_string_free(manifest);
  EXPECT_EQ(j["files"].size(), 1u);
  EXPECT_TRUE(std::filesystem::exists(out / "spectrum.csv"));
  size_t groups = 0;
  ASSERT_EQ(mbl_emit_plotdata((out / "spectrum.csv").string().c_str(), "seed", "energy", nullptr,
                              (out / "plot.csv").string().c_str(), &groups),
            MBL_OK);
  EXPECT_EQ(groups, 2u);
  EXPECT_STRNE(mbl_version(), "");
}
