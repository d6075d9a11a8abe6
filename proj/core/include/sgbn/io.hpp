#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "sgbn/classifiers.hpp"

namespace sgbn {

// Model file: {"m": int, "theta": row-major (m+1) x m, "sigma": [m], "tau": real}
struct ModelFile {
  SgbnParams theta;
  NoiseModel sigma;
  double tau = kDefaultEdgeThreshold;
};

std::string to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);
void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

// Certificate file: {"o": [m], "upsilon": row-major m x m, "delta": real}
std::string to_json(const OrderingCertificate& cert);
OrderingCertificate certificate_from_json(const std::string& text);
void save_certificate(const OrderingCertificate& cert, const std::string& path);
OrderingCertificate load_certificate(const std::string& path);

// Class-pair file: both models, certificates, priors and recorded budgets.
std::string to_json(const ClassPairModel& pair, double tau);
ClassPairModel pair_from_json(const std::string& text);
void save_pair(const ClassPairModel& pair, double tau, const std::string& path);
ClassPairModel load_pair(const std::string& path);

std::string to_json(const SolveReport& report);

// Reproducibility sidecar written next to every command output.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;  // resolved parameters, as printed
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_hashes;  // path -> content digest
  std::string version;
};

std::string to_json(const RunManifest& manifest);
void save_manifest(const RunManifest& manifest, const std::string& path);

// Content digest of a file (FNV-1a over the raw bytes), hex encoded.
std::string file_digest(const std::string& path);

// Shortest exact decimal for doubles in CSV cells (17 significant digits).
std::string format_full(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sgbn
