#include "uclab/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace uclab {

nlohmann::json state_to_json(const DensityOperator& rho) {
  nlohmann::json j;
  j["dims"] = rho.dims;
  std::vector<double> re, im;
  re.reserve(rho.mat.size());
  im.reserve(rho.mat.size());
  for (Index r = 0; r < rho.mat.rows(); ++r)
    for (Index c = 0; c < rho.mat.cols(); ++c) {
      re.push_back(rho.mat(r, c).real());
      im.push_back(rho.mat(r, c).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

DensityOperator state_from_json(const nlohmann::json& j) {
  DensityOperator rho;
  rho.dims = j.at("dims").get<std::vector<Index>>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  const Index d = product(rho.dims);
  if (re.size() != static_cast<size_t>(d * d) || im.size() != re.size())
    throw std::invalid_argument("state file: entry count does not match dims");
  rho.mat.resize(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c) {
      const size_t k = static_cast<size_t>(r * d + c);
      rho.mat(r, c) = Complex(re[k], im[k]);
    }
  return rho;
}

void save_state(const std::string& path, const DensityOperator& rho) {
  write_text_atomic(path, state_to_json(rho).dump());
}

DensityOperator load_state(const std::string& path) {
  return state_from_json(nlohmann::json::parse(read_text(path)));
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace uclab
