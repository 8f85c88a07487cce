#include "dsm/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

namespace dsm::grid {

using nlohmann::json;

GridFunction::GridFunction(int d_, int M_, double fill) : d(d_), M(M_) {
  if (d < 1 || M < 1) throw std::domain_error("GridFunction: bad dimensions");
  double n = std::pow(static_cast<double>(M), d);
  if (n > 100e6) throw budget_error("GridFunction: grid too large");
  values.assign(static_cast<size_t>(n), fill);
}

size_t GridFunction::index(const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != d) throw std::domain_error("GridFunction: bad coordinate arity");
  size_t idx = 0;
  for (int i = 0; i < d; ++i) {
    int c = x[static_cast<size_t>(i)] % M;
    if (c < 0) c += M;
    idx = idx * static_cast<size_t>(M) + static_cast<size_t>(c);
  }
  return idx;
}

double GridFunction::norm_lp(double p) const {
  double acc = 0;
  for (double v : values) acc += std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

double GridFunction::norm_linf() const {
  double m = 0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::sum() const {
  double acc = 0;
  for (double v : values) acc += v;
  return acc;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (f.d != g.d || f.M != g.M) throw std::domain_error("inner_product: shape mismatch");
  double acc = 0;
  for (size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * g.values[i];
  return acc;
}

void save_json(const GridFunction& f, std::ostream& os) {
  json j{{"d", f.d}, {"M", f.M}, {"flags", f.flags}, {"values", f.values}};
  os << j.dump();
}

GridFunction load_json(std::istream& is) {
  json j = json::parse(is);
  GridFunction f(j.at("d").get<int>(), j.at("M").get<int>());
  f.flags = j.at("flags").get<std::uint32_t>();
  auto vals = j.at("values").get<std::vector<double>>();
  if (vals.size() != f.values.size()) throw std::domain_error("load_json: value count mismatch");
  f.values = std::move(vals);
  return f;
}

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::domain_error("binary load: truncated header");
  return v;
}

void expect_magic(std::istream& is, const char* magic) {
  char buf[4];
  is.read(buf, 4);
  if (!is || std::string(buf, 4) != magic) throw std::domain_error("binary load: bad magic");
}

}  // namespace

void save_binary(const GridFunction& f, std::ostream& os) {
  os.write("DSMG", 4);
  write_u32(os, static_cast<std::uint32_t>(f.d));
  write_u32(os, static_cast<std::uint32_t>(f.M));
  write_u32(os, f.flags);
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

GridFunction load_binary(std::istream& is) {
  expect_magic(is, "DSMG");
  const int d = static_cast<int>(read_u32(is));
  const int M = static_cast<int>(read_u32(is));
  GridFunction f(d, M);
  f.flags = read_u32(is);
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw std::domain_error("load_binary: truncated values");
  return f;
}

void save_json(const multiplier::FreqMultiplier& m, std::ostream& os) {
  std::vector<double> interleaved;
  interleaved.reserve(m.values.size() * 2);
  for (cdouble v : m.values) {
    interleaved.push_back(v.real());
    interleaved.push_back(v.imag());
  }
  json j{{"d", m.d}, {"M", m.M}, {"values_interleaved", interleaved}};
  os << j.dump();
}

multiplier::FreqMultiplier load_multiplier_json(std::istream& is) {
  json j = json::parse(is);
  multiplier::FreqMultiplier m;
  m.d = j.at("d").get<int>();
  m.M = j.at("M").get<int>();
  auto iv = j.at("values_interleaved").get<std::vector<double>>();
  m.values.resize(iv.size() / 2);
  for (size_t i = 0; i < m.values.size(); ++i) m.values[i] = {iv[2 * i], iv[2 * i + 1]};
  return m;
}

void save_binary(const multiplier::FreqMultiplier& m, std::ostream& os) {
  os.write("DSMF", 4);
  write_u32(os, static_cast<std::uint32_t>(m.d));
  write_u32(os, static_cast<std::uint32_t>(m.M));
  write_u32(os, 0);
  os.write(reinterpret_cast<const char*>(m.values.data()),
           static_cast<std::streamsize>(m.values.size() * sizeof(cdouble)));
}

multiplier::FreqMultiplier load_multiplier_binary(std::istream& is) {
  expect_magic(is, "DSMF");
  multiplier::FreqMultiplier m;
  m.d = static_cast<int>(read_u32(is));
  m.M = static_cast<int>(read_u32(is));
  read_u32(is);
  const size_t n = static_cast<size_t>(std::pow(static_cast<double>(m.M), m.d));
  m.values.resize(n);
  is.read(reinterpret_cast<char*>(m.values.data()),
          static_cast<std::streamsize>(n * sizeof(cdouble)));
  if (!is) throw std::domain_error("load_multiplier_binary: truncated values");
  return m;
}

namespace {

std::vector<cdouble> run_fftw(const std::vector<cdouble>& in, int d, int M, int sign) {
  std::vector<cdouble> out(in.size());
  std::vector<int> dims(static_cast<size_t>(d), M);
  fftw_plan plan = fftw_plan_dft(
      d, dims.data(),
      reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in.data())),
      reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<cdouble> dft(const GridFunction& f) {
  std::vector<cdouble> in(f.values.begin(), f.values.end());
  return run_fftw(in, f.d, f.M, FFTW_FORWARD);
}

GridFunction apply_multiplier(const GridFunction& f, const multiplier::FreqMultiplier& m,
                              double* imag_residual) {
  if (f.d != m.d || f.M != m.M) throw std::domain_error("apply_multiplier: shape mismatch");
  std::vector<cdouble> fhat = dft(f);
  for (size_t i = 0; i < fhat.size(); ++i) fhat[i] *= m.values[i];
  std::vector<cdouble> back = run_fftw(fhat, f.d, f.M, FFTW_BACKWARD);
  GridFunction out(f.d, f.M);
  const double scale = 1.0 / static_cast<double>(f.values.size());
  double resid = 0;
  for (size_t i = 0; i < back.size(); ++i) {
    out.values[i] = back[i].real() * scale;
    resid = std::max(resid, std::abs(back[i].imag()) * scale);
  }
  if (imag_residual) *imag_residual = resid;
  return out;
}

std::vector<cdouble> kernel_of(const multiplier::FreqMultiplier& m) {
  std::vector<cdouble> back = run_fftw(m.values, m.d, m.M, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(back.size());
  for (auto& v : back) v *= scale;
  return back;
}

}  // namespace dsm::grid
