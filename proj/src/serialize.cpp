#include "doilab/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace doilab {

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  nlohmann::json out;
  if (m.rows() == m.cols()) {
    out["dim"] = m.rows();
  } else {
    out["rows"] = m.rows();
    out["cols"] = m.cols();
  }
  out["re"] = re;
  out["im"] = im;
  return out;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (j.contains("dim")) {
      rows = cols = j.at("dim").get<Eigen::Index>();
    } else {
      rows = j.at("rows").get<Eigen::Index>();
      cols = j.at("cols").get<Eigen::Index>();
    }
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 1 || cols < 1 || re.size() != std::size_t(rows * cols) || im.size() != re.size()) {
      throw Error(ErrorCode::ConfigError, "matrix JSON has inconsistent sizes");
    }
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        const std::size_t idx = std::size_t(i * cols + k);
        m(i, k) = Complex(re[idx].get<double>(), im[idx].get<double>());
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed matrix JSON: ") + e.what());
  }
}

nlohmann::json spectrum_to_json(const JointSpectrum& spec) {
  nlohmann::json pairs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < spec.dim(); ++i) pairs.push_back({spec.points(i, 0), spec.points(i, 1)});
  return {{"dim", spec.dim()},
          {"basis", matrix_to_json(spec.basis)},
          {"pairs", pairs},
          {"residual", spec.reconstruction_residual}};
}

JointSpectrum spectrum_from_json(const nlohmann::json& j) {
  try {
    JointSpectrum spec;
    spec.basis = matrix_from_json(j.at("basis"));
    const Eigen::Index n = spec.basis.rows();
    if (spec.basis.cols() != n || j.at("dim").get<Eigen::Index>() != n) {
      throw Error(ErrorCode::ConfigError, "spectrum basis must be dim x dim");
    }
    const auto& pairs = j.at("pairs");
    if (pairs.size() != std::size_t(n)) throw Error(ErrorCode::ConfigError, "spectrum needs dim pairs");
    spec.points.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      spec.points(i, 0) = pairs[std::size_t(i)].at(0).get<double>();
      spec.points(i, 1) = pairs[std::size_t(i)].at(1).get<double>();
    }
    spec.reconstruction_residual = j.value("residual", 0.0);
    const double defect =
        operator_norm((spec.basis.adjoint() * spec.basis - CMatrix::Identity(n, n)).eval());
    if (defect > 1e-10) throw Error(ErrorCode::ConfigError, "spectrum basis is not unitary");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed spectrum JSON: ") + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move report into place at " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace doilab
