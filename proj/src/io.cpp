#include "fracpar/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>

namespace fracpar::io {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'F', 'P', 'E', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_blob(const std::string& path, std::uint32_t d0, std::uint32_t d1,
                const std::vector<const Eigen::MatrixXd*>& arrays) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot write '" + path + "'");
    out.write(kMagic, 4);
    auto put_u32 = [&](std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), 4);
    };
    put_u32(kVersion);
    put_u32(d0);
    put_u32(d1);
    for (const auto* a : arrays) {
        // row-major on disk
        for (Eigen::Index i = 0; i < a->rows(); ++i)
            for (Eigen::Index j = 0; j < a->cols(); ++j) {
                const double v = (*a)(i, j);
                out.write(reinterpret_cast<const char*>(&v), 8);
            }
    }
    if (!out) throw std::runtime_error("io: short write to '" + path + "'");
}

struct BlobReader {
    std::ifstream in;
    std::uint32_t d0 = 0, d1 = 0;

    explicit BlobReader(const std::string& path) : in(path, std::ios::binary) {
        if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
        char magic[4];
        in.read(magic, 4);
        if (!in || std::memcmp(magic, kMagic, 4) != 0)
            throw std::runtime_error("io: bad magic in '" + path + "'");
        std::uint32_t version = 0;
        in.read(reinterpret_cast<char*>(&version), 4);
        if (version != kVersion)
            throw std::runtime_error("io: unsupported FPES version in '" + path + "'");
        in.read(reinterpret_cast<char*>(&d0), 4);
        in.read(reinterpret_cast<char*>(&d1), 4);
        if (!in) throw std::runtime_error("io: truncated header in '" + path + "'");
    }

    Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                double v;
                in.read(reinterpret_cast<char*>(&v), 8);
                m(i, j) = v;
            }
        if (!in) throw std::runtime_error("io: truncated FPES payload");
        return m;
    }
};

json operator_manifest(const OperatorSpec& spec, int K, int N) {
    return json{{"kind", kind_name(spec.kind)},
                {"alpha", spec.alpha},
                {"lambda_param", spec.lambda_param},
                {"x_lo", spec.x_lo},
                {"x_hi", spec.x_hi},
                {"K", K},
                {"N", N}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
    return json::parse(in);
}

}  // namespace

void write_eigensystem(const std::string& base, const EigenSystem& es) {
    const Eigen::MatrixXd xm = es.x, wm = es.w, lm = es.lambda;
    write_blob(base + ".bin", static_cast<std::uint32_t>(es.modes()),
               static_cast<std::uint32_t>(es.grid_size()), {&xm, &wm, &lm, &es.phi});
    json j = {{"schema", "fracpar-eigensystem/1"},
              {"operator", operator_manifest(es.spec, es.modes(), es.grid_size())},
              {"zero_mean_mode", es.zero_mean_mode},
              {"eigen_shift", es.eigen_shift},
              {"truncation", es.note}};
    write_json(base + ".json", j);
}

EigenSystem read_eigensystem(const std::string& base) {
    const json j = read_json(base + ".json");
    if (j.value("schema", "") != "fracpar-eigensystem/1")
        throw std::runtime_error("io: '" + base + ".json' is not an eigensystem manifest");
    BlobReader blob(base + ".bin");
    const int K = static_cast<int>(blob.d0), N = static_cast<int>(blob.d1);
    EigenSystem es;
    const json& op = j.at("operator");
    es.spec.kind = kind_from_name(op.at("kind").get<std::string>());
    es.spec.alpha = op.at("alpha").get<double>();
    es.spec.lambda_param = op.at("lambda_param").get<double>();
    es.spec.x_lo = op.at("x_lo").get<double>();
    es.spec.x_hi = op.at("x_hi").get<double>();
    es.x = blob.matrix(N, 1);
    es.w = blob.matrix(N, 1);
    es.lambda = blob.matrix(K, 1);
    es.phi = blob.matrix(N, K);
    es.zero_mean_mode = j.at("zero_mean_mode").get<bool>();
    es.eigen_shift = j.at("eigen_shift").get<double>();
    es.note = j.at("truncation").get<std::string>();
    return es;
}

void write_field(const std::string& base, const SpaceTimeField& u) {
    const Eigen::MatrixXd re = u.values.real(), im = u.values.imag();
    write_blob(base + ".bin", static_cast<std::uint32_t>(u.time.M),
               static_cast<std::uint32_t>(u.space->grid_size()), {&re, &im});
    json j = {{"schema", "fracpar-field/1"},
              {"time", {{"M", u.time.M}, {"T", u.time.T}}},
              {"operator",
               operator_manifest(u.space->spec, u.space->modes(),
                                 u.space->grid_size())}};
    write_json(base + ".json", j);
}

SpaceTimeField read_field(const std::string& base) {
    const json j = read_json(base + ".json");
    if (j.value("schema", "") != "fracpar-field/1")
        throw std::runtime_error("io: '" + base + ".json' is not a field manifest");
    const json& op = j.at("operator");
    OperatorSpec spec;
    spec.kind = kind_from_name(op.at("kind").get<std::string>());
    spec.alpha = op.at("alpha").get<double>();
    spec.lambda_param = op.at("lambda_param").get<double>();
    spec.x_lo = op.at("x_lo").get<double>();
    spec.x_hi = op.at("x_hi").get<double>();
    if (spec.kind == OperatorKind::generic_divergence)
        throw std::runtime_error(
            "io: generic_divergence fields cannot be rebuilt from a manifest");
    auto es = std::make_shared<const EigenSystem>(
        build_eigensystem(spec, op.at("K").get<int>(), op.at("N").get<int>()));
    TimeGrid tg(j.at("time").at("M").get<int>(), j.at("time").at("T").get<double>());
    BlobReader blob(base + ".bin");
    if (static_cast<int>(blob.d0) != tg.M ||
        static_cast<int>(blob.d1) != es->grid_size())
        throw std::runtime_error("io: field blob dimensions disagree with manifest");
    SpaceTimeField u(tg, es);
    const Eigen::MatrixXd re = blob.matrix(tg.M, es->grid_size());
    const Eigen::MatrixXd im = blob.matrix(tg.M, es->grid_size());
    u.values = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
    return u;
}

}  // namespace fracpar::io
