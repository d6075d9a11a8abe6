#include "sgbn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sgbn/hashing.hpp"

namespace sgbn {

using nlohmann::json;

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << text;
}

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) rows.push_back(m(i, j));
  return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(j.size()) != rows * cols)
    throw std::invalid_argument("matrix payload has wrong length");
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(static_cast<std::size_t>(k++)).get<double>();
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json model_to_json_obj(const ModelFile& model) {
  json j;
  j["m"] = model.theta.m;
  j["theta"] = matrix_to_json(model.theta.theta);
  j["sigma"] = vector_to_json(model.sigma.sigma);
  j["tau"] = model.tau;
  return j;
}

ModelFile model_from_json_obj(const json& j) {
  ModelFile model;
  model.theta.m = j.at("m").get<int>();
  model.theta.theta = matrix_from_json(j.at("theta"), model.theta.m + 1, model.theta.m);
  model.sigma.sigma = vector_from_json(j.at("sigma"));
  model.tau = j.at("tau").get<double>();
  model.theta.validate();
  model.sigma.validate();
  return model;
}

json cert_to_json_obj(const OrderingCertificate& cert) {
  json j;
  j["o"] = vector_to_json(cert.o);
  j["upsilon"] = matrix_to_json(cert.upsilon);
  j["delta"] = cert.delta;
  return j;
}

OrderingCertificate cert_from_json_obj(const json& j) {
  OrderingCertificate cert;
  cert.o = vector_from_json(j.at("o"));
  const auto m = cert.o.size();
  cert.upsilon = matrix_from_json(j.at("upsilon"), m, m);
  cert.delta = j.at("delta").get<double>();
  return cert;
}

}  // namespace

std::string to_json(const ModelFile& model) { return model_to_json_obj(model).dump(2) + "\n"; }

ModelFile model_from_json(const std::string& text) {
  return model_from_json_obj(json::parse(text));
}

void save_model(const ModelFile& model, const std::string& path) {
  write_text_file(path, to_json(model));
}

ModelFile load_model(const std::string& path) {
  try {
    return model_from_json(read_text_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string to_json(const OrderingCertificate& cert) { return cert_to_json_obj(cert).dump(2) + "\n"; }

OrderingCertificate certificate_from_json(const std::string& text) {
  return cert_from_json_obj(json::parse(text));
}

void save_certificate(const OrderingCertificate& cert, const std::string& path) {
  write_text_file(path, to_json(cert));
}

OrderingCertificate load_certificate(const std::string& path) {
  try {
    return certificate_from_json(read_text_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string to_json(const ClassPairModel& pair, double tau) {
  json j;
  j["model1"] = model_to_json_obj({pair.theta1, pair.sigma1, tau});
  j["model2"] = model_to_json_obj({pair.theta2, pair.sigma2, tau});
  j["cert1"] = cert_to_json_obj(pair.cert1);
  j["cert2"] = cert_to_json_obj(pair.cert2);
  j["priors"] = {pair.prior1, pair.prior2};
  j["t1"] = pair.t1;
  j["t2"] = pair.t2;
  return j.dump(2) + "\n";
}

ClassPairModel pair_from_json(const std::string& text) {
  const json j = json::parse(text);
  ClassPairModel pair;
  const ModelFile m1 = model_from_json_obj(j.at("model1"));
  const ModelFile m2 = model_from_json_obj(j.at("model2"));
  pair.theta1 = m1.theta;
  pair.sigma1 = m1.sigma;
  pair.theta2 = m2.theta;
  pair.sigma2 = m2.sigma;
  pair.cert1 = cert_from_json_obj(j.at("cert1"));
  pair.cert2 = cert_from_json_obj(j.at("cert2"));
  pair.prior1 = j.at("priors").at(0).get<double>();
  pair.prior2 = j.at("priors").at(1).get<double>();
  pair.t1 = j.at("t1").get<double>();
  pair.t2 = j.at("t2").get<double>();
  pair.validate();
  return pair;
}

void save_pair(const ClassPairModel& pair, double tau, const std::string& path) {
  write_text_file(path, to_json(pair, tau));
}

ClassPairModel load_pair(const std::string& path) {
  try {
    return pair_from_json(read_text_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string to_json(const SolveReport& report) {
  json j;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["final_objective"] = report.final_objective;
  j["max_constraint_violation"] = report.max_constraint_violation;
  return j.dump(2) + "\n";
}

std::string to_json(const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["config"] = manifest.config;
  j["seed"] = manifest.seed;
  j["input_hashes"] = manifest.input_hashes;
  j["version"] = manifest.version;
  return j.dump(2) + "\n";
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  write_text_file(path, to_json(manifest));
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_text_file(path);
  return hex64(fnv1a64(bytes.data(), bytes.size()));
}

}  // namespace sgbn
