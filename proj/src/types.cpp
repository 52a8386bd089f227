#include "specbsa/types.hpp"

#include <cmath>
#include <utility>

namespace specbsa {

namespace {

// Slack used when checking sorted order of a spectrum. Projected points are
// only feasible up to solver tolerance, so this is looser than machine eps.
constexpr double kConeSlack = 1e-9;

} // namespace

Network validate_network(const Eigen::MatrixXd& raw, std::string id) {
    if (raw.rows() != raw.cols())
        throw NonSquare("adjacency matrix is " + std::to_string(raw.rows()) + "x" +
                        std::to_string(raw.cols()));
    if (raw.size() == 0)
        throw NonSquare("adjacency matrix is empty");
    if (!raw.allFinite())
        throw NonFinite("adjacency matrix contains non-finite entries");

    const double max_abs = raw.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(1.0, max_abs);
    const double skew = (raw - raw.transpose()).cwiseAbs().maxCoeff();
    if (skew > tol)
        throw NonSymmetric("asymmetry " + std::to_string(skew) + " exceeds tolerance " +
                           std::to_string(tol));

    Network net;
    net.id = std::move(id);
    net.adjacency = 0.5 * (raw + raw.transpose());
    return net;
}

Spectrum::Spectrum(Eigen::VectorXd v) : values(std::move(v)) {
    if (values.size() == 0)
        throw InvalidArgument("spectrum must have at least one value");
    if (!values.allFinite())
        throw NonFinite("spectrum contains non-finite entries");
    const double slack = kConeSlack * std::max(1.0, values.cwiseAbs().maxCoeff());
    for (Eigen::Index r = 0; r + 1 < values.size(); ++r) {
        if (values[r] > values[r + 1] + slack)
            throw OutsideCone("values are not ascending at position " + std::to_string(r));
    }
}

TangentVector::TangentVector(Eigen::VectorXd c) : components(std::move(c)) {
    if (!components.allFinite())
        throw NonFinite("tangent vector contains non-finite entries");
}

} // namespace specbsa
