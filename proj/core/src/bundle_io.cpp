#include <sketchfem/bundle_io.hpp>

#include <sketchfem/error.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

namespace sketchfem {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return value;
  }
}

class Writer {
 public:
  void raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + size);
  }
  void u64(std::uint64_t v) {
    v = to_little(v);
    raw(&v, sizeof v);
  }
  void f64(double v) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    raw(&bits, sizeof bits);
  }
  template <class Derived>
  void array(const Eigen::DenseBase<Derived>& a) {
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i) f64(a(i, j));
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void raw(void* out, std::size_t size) {
    if (bytes_.size() - pos_ < size) throw FormatError("bundle is truncated");
    std::memcpy(out, bytes_.data() + pos_, size);
    pos_ += size;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return to_little(v);
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void fill(Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i) m(i, j) = f64();
  }
  void fill(Vector& v) {
    for (Index i = 0; i < v.size(); ++i) v[i] = f64();
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void validate(const OfflineBundle& b) {
  if (!b.basis.allFinite() || !b.eigenvalues.allFinite() || !b.leverage.allFinite() ||
      !b.probabilities.allFinite() || !b.reduced_load.allFinite()) {
    throw FormatError("bundle contains non-finite values");
  }
  const Index rho = b.rank();
  const double orth = (b.basis.transpose() * b.basis - Matrix::Identity(rho, rho)).cwiseAbs().maxCoeff();
  if (orth > 1e-10) throw FormatError("bundle basis is not orthonormal (deviation " + std::to_string(orth) + ")");
  for (Index j = 1; j < rho; ++j) {
    if (b.eigenvalues[j] < b.eigenvalues[j - 1]) throw FormatError("bundle eigenvalues are not ascending");
  }
  if (b.leverage.minCoeff() < 0.0 || b.leverage.maxCoeff() > 1.0 + 1e-12) {
    throw FormatError("bundle leverage scores leave [0, 1]");
  }
  if (std::abs(b.leverage.sum() - static_cast<double>(rho)) > 1e-8) {
    throw FormatError("bundle leverage scores do not sum to rho");
  }
  if (b.probabilities.minCoeff() < 0.0 || std::abs(b.probabilities.sum() - 1.0) > 1e-12) {
    throw FormatError("bundle sampling distribution does not sum to 1");
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_bundle(const OfflineBundle& bundle) {
  const Index n = bundle.num_interior();
  const Index rho = bundle.rank();
  const Index kd = bundle.num_rows();
  if (bundle.eigenvalues.size() != rho || bundle.probabilities.size() != kd || bundle.reduced_load.size() != rho) {
    throw ValidationError("inconsistent offline bundle");
  }
  Writer w;
  w.raw(kBundleMagic, sizeof kBundleMagic);
  w.u64(static_cast<std::uint64_t>(n));
  w.u64(static_cast<std::uint64_t>(rho));
  w.u64(static_cast<std::uint64_t>(kd));
  w.array(bundle.basis);
  w.array(bundle.eigenvalues);
  w.array(bundle.leverage);
  w.array(bundle.probabilities);
  w.array(bundle.reduced_load);
  w.raw(bundle.mesh_fingerprint.data(), bundle.mesh_fingerprint.size());
  return w.take();
}

OfflineBundle deserialize_bundle(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kBundleMagic, 5) != 0) throw FormatError("not an offline bundle (bad magic)");
  if (std::memcmp(magic, kBundleMagic, sizeof magic) != 0) {
    throw FormatError("unsupported bundle version '" + std::string(magic + 5, 2) + "'");
  }
  const std::uint64_t n = r.u64();
  const std::uint64_t rho = r.u64();
  const std::uint64_t kd = r.u64();
  if (rho == 0 || rho > n) throw FormatError("bundle header has rho outside [1, n]");
  // Overflow-safe size check before allocating.
  const std::uint64_t limit = r.remaining() / 8;
  if (n > limit || kd > limit || (rho != 0 && n > limit / rho)) throw FormatError("bundle is truncated");
  const std::uint64_t doubles = n * rho + 2 * rho + 2 * kd;
  if (r.remaining() != doubles * 8 + 32) {
    throw FormatError(r.remaining() < doubles * 8 + 32 ? "bundle is truncated" : "bundle has trailing bytes");
  }
  OfflineBundle b;
  b.basis.resize(static_cast<Index>(n), static_cast<Index>(rho));
  b.eigenvalues.resize(static_cast<Index>(rho));
  b.leverage.resize(static_cast<Index>(kd));
  b.probabilities.resize(static_cast<Index>(kd));
  b.reduced_load.resize(static_cast<Index>(rho));
  r.fill(b.basis);
  r.fill(b.eigenvalues);
  r.fill(b.leverage);
  r.fill(b.probabilities);
  r.fill(b.reduced_load);
  r.raw(b.mesh_fingerprint.data(), b.mesh_fingerprint.size());
  validate(b);
  return b;
}

void save_bundle(const OfflineBundle& bundle, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_bundle(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write bundle '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("failed writing bundle '" + path.string() + "'");
}

OfflineBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open bundle '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_bundle(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Fingerprint mesh_fingerprint(const Mesh& mesh) {
  Writer w;
  w.u64(static_cast<std::uint64_t>(mesh.dim()));
  w.u64(static_cast<std::uint64_t>(mesh.num_vertices()));
  w.u64(static_cast<std::uint64_t>(mesh.num_elements()));
  w.array(mesh.vertices());
  for (Index l = 0; l < mesh.num_elements(); ++l)
    for (Index a = 0; a < mesh.elements().rows(); ++a) w.u64(static_cast<std::uint64_t>(mesh.elements()(a, l)));
  const std::vector<std::uint8_t> bytes = w.take();

  Fingerprint digest{};
  const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1 || length != digest.size()) {
    throw NumericalError("SHA-256 computation failed");
  }
  return digest;
}

std::string to_hex(const Fingerprint& fingerprint) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t byte : fingerprint) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 15]);
  }
  return out;
}

}  // namespace sketchfem
