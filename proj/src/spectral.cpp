#include "gspi/spectral.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gspi/error.hpp"
#include "gspi/io.hpp"

namespace gspi {

namespace {

// entries within this of the maximum magnitude count as ties
constexpr double kSignTieTolerance = 1e-12;

void normalize_sign(Eigen::Ref<Eigen::VectorXd> u)
{
    const double max_abs = u.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) >= max_abs - kSignTieTolerance) {
            if (u(i) < 0)
                u = -u;
            return;
        }
    }
}

}  // namespace

SpectralBasis eigendecompose(const Eigen::MatrixXd& L)
{
    if (L.rows() != L.cols() || L.rows() == 0)
        throw ValidationError("laplacian must be a non-empty square matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigensolver did not converge");

    SpectralBasis basis{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index l = 0; l < basis.eigenvectors.cols(); ++l)
        normalize_sign(basis.eigenvectors.col(l));

    const double scale = std::max(1.0, basis.lambda_max());
    const Eigen::MatrixXd residual = L * basis.eigenvectors - basis.eigenvectors * basis.eigenvalues.asDiagonal();
    const double worst = residual.colwise().norm().maxCoeff();
    if (worst > 1e-6 * scale) {
        std::ostringstream msg;
        msg << "eigen-residual " << worst << " exceeds tolerance " << 1e-6 * scale;
        throw NumericError(msg.str());
    }
    if (std::abs(basis.eigenvalues(0)) > 1e-8)
        throw NumericError("smallest laplacian eigenvalue is not zero");
    basis.eigenvalues(0) = 0.0;
    return basis;
}

std::vector<double> gft(const SpectralBasis& basis, std::span<const double> signal)
{
    if (static_cast<int>(signal.size()) != basis.size())
        throw ValidationError("signal length " + std::to_string(signal.size()) + " does not match basis size "
                              + std::to_string(basis.size()));
    Eigen::Map<const Eigen::VectorXd> s(signal.data(), static_cast<Eigen::Index>(signal.size()));
    Eigen::VectorXd hat = basis.eigenvectors.transpose() * s;
    return {hat.data(), hat.data() + hat.size()};
}

std::vector<double> spectrum_slice(std::span<const double> spectrum, std::span<const int> indices)
{
    std::vector<double> out;
    out.reserve(indices.size());
    for (int i : indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= spectrum.size())
            throw ValidationError("spectrum index " + std::to_string(i) + " out of range");
        out.push_back(spectrum[static_cast<std::size_t>(i)]);
    }
    return out;
}

double inf_norm(const SpectralBasis& basis, int l) { return basis.eigenvectors.col(l).cwiseAbs().maxCoeff(); }

SpectralCache::SpectralCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

namespace {

std::string hash_name(const WeightedGraph& g)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(g.content_hash()));
    return buf;
}

}  // namespace

std::optional<SpectralBasis> SpectralCache::load(const WeightedGraph& g) const
{
    const auto name = hash_name(g);
    const auto meta_path = dir_ / (name + ".json");
    const auto bin_path = dir_ / (name + ".bin");
    if (!std::filesystem::exists(meta_path) || !std::filesystem::exists(bin_path))
        return std::nullopt;
    const auto meta = read_json(meta_path);
    const int n = meta.at("n").get<int>();
    if (n != g.node_count())
        return std::nullopt;
    const std::string raw = read_file(bin_path);
    const std::size_t expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) * sizeof(double);
    if (raw.size() != expected)
        return std::nullopt;
    SpectralBasis basis{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    std::memcpy(basis.eigenvalues.data(), raw.data(), static_cast<std::size_t>(n) * sizeof(double));
    std::memcpy(basis.eigenvectors.data(), raw.data() + static_cast<std::size_t>(n) * sizeof(double),
                static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * sizeof(double));
    return basis;
}

void SpectralCache::store(const WeightedGraph& g, const SpectralBasis& basis) const
{
    const auto name = hash_name(g);
    const int n = basis.size();
    std::string raw(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) * sizeof(double), '\0');
    std::memcpy(raw.data(), basis.eigenvalues.data(), static_cast<std::size_t>(n) * sizeof(double));
    std::memcpy(raw.data() + static_cast<std::size_t>(n) * sizeof(double), basis.eigenvectors.data(),
                static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * sizeof(double));
    write_file_atomic(dir_ / (name + ".bin"), raw);
    write_json_atomic(dir_ / (name + ".json"),
                      {{"n", n}, {"hash", name}, {"layout", "eigenvalues then column-major eigenvectors, f64 native"}});
}

SpectralBasis SpectralCache::load_or_compute(const WeightedGraph& g) const
{
    if (auto cached = load(g))
        return *std::move(cached);
    auto basis = eigendecompose(g);
    store(g, basis);
    return basis;
}

}  // namespace gspi
