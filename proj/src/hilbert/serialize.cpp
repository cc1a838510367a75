#include "gie/hilbert.hpp"

#include "gie/error.hpp"

#include <json.hpp>

namespace gie::hilbert {
namespace {

using nlohmann::json;

json matrix_doc(const Dims& dims, const Eigen::MatrixXcd& m)
{
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    return {{"dims", dims}, {"re", re}, {"im", im}};
}

struct Parsed {
    Dims dims;
    std::vector<Complex> values;
};

Parsed parse_doc(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    for (const char* key : {"dims", "re", "im"})
        if (!doc.contains(key) || !doc[key].is_array())
            throw ValidationError(std::string("JSON document needs array field '") + key + "'");
    Parsed p;
    try {
        p.dims = doc["dims"].get<Dims>();
        const auto re = doc["re"].get<std::vector<double>>();
        const auto im = doc["im"].get<std::vector<double>>();
        if (re.size() != im.size())
            throw ValidationError("'re' and 'im' lengths differ");
        p.values.reserve(re.size());
        for (std::size_t i = 0; i < re.size(); ++i)
            p.values.emplace_back(re[i], im[i]);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad JSON field type: ") + e.what());
    }
    return p;
}

Eigen::MatrixXcd square_from(const Parsed& p)
{
    const std::size_t n = total_dimension(p.dims);
    if (p.values.size() != n * n)
        throw ValidationError("matrix entry count does not match dims");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.values[i * n + j];
    return m;
}

} // namespace

std::string to_json(const StateVector& s)
{
    return matrix_doc(s.dims(), s.amplitudes()).dump();
}

std::string to_json(const DensityMatrix& rho)
{
    return matrix_doc(rho.dims(), rho.entries()).dump();
}

std::string to_json(const WitnessOperator& w)
{
    return matrix_doc(w.dims(), w.entries()).dump();
}

StateVector state_from_json(const std::string& text)
{
    const Parsed p = parse_doc(text);
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(p.values.size()));
    for (std::size_t i = 0; i < p.values.size(); ++i)
        amps(static_cast<Eigen::Index>(i)) = p.values[i];
    return {p.dims, std::move(amps)};
}

DensityMatrix density_from_json(const std::string& text)
{
    const Parsed p = parse_doc(text);
    return {p.dims, square_from(p)};
}

WitnessOperator witness_from_json(const std::string& text)
{
    const Parsed p = parse_doc(text);
    return {p.dims, square_from(p)};
}

} // namespace gie::hilbert
