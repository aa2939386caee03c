#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcreg::io {

namespace {

std::ifstream open_in(const fs::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw std::runtime_error("cannot open " + p.string());
    return in;
}

std::ofstream open_out(const fs::path& p)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    return out;
}

void expect(std::istream& in, const std::string& tok, const fs::path& p)
{
    std::string got;
    in >> got;
    if (got != tok)
        throw std::runtime_error(p.string() + ": expected '" + tok + "', got '" + got + "'");
}

}  // namespace

std::string render(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_signal(const fs::path& p, const std::vector<double>& x)
{
    std::ofstream out = open_out(p);
    for (double v : x)
        out << render(v) << '\n';
}

std::vector<double> read_signal(const fs::path& p)
{
    std::ifstream in = open_in(p);
    std::vector<double> x;
    double v;
    while (in >> v)
        x.push_back(v);
    return x;
}

void write_image_text(const fs::path& p, const Image& img)
{
    std::ofstream out = open_out(p);
    out << img.side << '\n';
    for (double v : img.px)
        out << render(v) << '\n';
}

Image read_image_text(const fs::path& p)
{
    std::ifstream in = open_in(p);
    Image img;
    if (!(in >> img.side) || img.side <= 0)
        throw std::runtime_error(p.string() + ": bad image header");
    img.px.resize(static_cast<std::size_t>(img.side) * img.side);
    for (double& v : img.px)
        if (!(in >> v))
            throw std::runtime_error(p.string() + ": truncated image");
    return img;
}

void write_image_pgm(const fs::path& p, const Image& img)
{
    std::ofstream out = open_out(p);
    out << "P2\n" << img.side << ' ' << img.side << "\n255\n";
    for (int r = 0; r < img.side; ++r) {
        for (int c = 0; c < img.side; ++c) {
            double v = img.at(r, c);
            int level = static_cast<int>(std::lround(255.0 * std::min(1.0, std::max(0.0, v))));
            out << level << (c + 1 == img.side ? '\n' : ' ');
        }
    }
}

void write_regularizer(const fs::path& p, const RegularizerArtifact& art)
{
    std::ofstream out = open_out(p);
    out << "qcreg-regularizer v1\n";
    const GridSpec& g = art.reg.grid;
    out << "grid " << g.m1 << ' ' << g.m2 << ' ' << g.n << ' ' << render(g.eps) << '\n';
    out << "filter " << art.filter.taps.size() << ' ' << art.filter.k0 << ' '
        << art.levels << '\n';
    for (double t : art.filter.taps)
        out << render(t) << '\n';
    out << "coords " << art.reg.coord_count() << '\n';
    for (std::size_t gamma = 0; gamma < art.reg.coord_count(); ++gamma) {
        out << "coeff " << gamma;
        for (double c : art.reg.coeffs[gamma])
            out << ' ' << render(c);
        out << '\n';
    }
}

RegularizerArtifact read_regularizer(const fs::path& p)
{
    std::ifstream in = open_in(p);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "qcreg-regularizer" || version != "v1")
        throw std::runtime_error(p.string() + ": not a qcreg-regularizer v1 file");
    RegularizerArtifact art;
    expect(in, "grid", p);
    int m1, m2, n;
    double eps;
    in >> m1 >> m2 >> n >> eps;
    GridSpec grid(m1, m2, n, eps);
    expect(in, "filter", p);
    std::size_t taps;
    in >> taps >> art.filter.k0 >> art.levels;
    art.filter.taps.resize(taps);
    for (double& t : art.filter.taps)
        in >> t;
    expect(in, "coords", p);
    std::size_t coords;
    in >> coords;
    std::vector<std::vector<double>> coeffs(coords,
                                            std::vector<double>(static_cast<std::size_t>(
                                                grid.bin_count())));
    for (std::size_t gamma = 0; gamma < coords; ++gamma) {
        expect(in, "coeff", p);
        std::size_t idx;
        in >> idx;
        if (idx != gamma)
            throw std::runtime_error(p.string() + ": coefficient rows out of order");
        for (double& c : coeffs[gamma])
            in >> c;
    }
    if (!in)
        throw std::runtime_error(p.string() + ": truncated regularizer file");
    art.reg = StepRegularizer(grid, std::move(coeffs));
    return art;
}

void write_filter(const fs::path& p, const ScalingFilter& f)
{
    std::ofstream out = open_out(p);
    out << "offsets";
    for (std::size_t j = 0; j < f.taps.size(); ++j)
        out << ' ' << (f.k0 + static_cast<int>(j));
    out << '\n';
    for (double t : f.taps)
        out << render(t) << '\n';
}

ScalingFilter read_filter(const fs::path& p)
{
    std::ifstream in = open_in(p);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(p.string() + ": empty filter file");
    std::istringstream hdr(line);
    expect(hdr, "offsets", p);
    std::vector<int> offsets;
    int k;
    while (hdr >> k)
        offsets.push_back(k);
    if (offsets.empty())
        throw std::runtime_error(p.string() + ": no offsets");
    for (std::size_t j = 1; j < offsets.size(); ++j)
        if (offsets[j] != offsets[0] + static_cast<int>(j))
            throw std::runtime_error(p.string() + ": offsets must be consecutive");
    ScalingFilter f;
    f.k0 = offsets[0];
    f.taps.resize(offsets.size());
    for (double& t : f.taps)
        if (!(in >> t))
            throw std::runtime_error(p.string() + ": truncated filter file");
    return f;
}

void write_lambdas(const fs::path& p, const std::vector<double>& lambda)
{
    std::ofstream out = open_out(p);
    out << "qcreg-lambdas v1\n";
    for (double v : lambda)
        out << render(v) << '\n';
}

std::vector<double> read_lambdas(const fs::path& p)
{
    std::ifstream in = open_in(p);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "qcreg-lambdas" || version != "v1")
        throw std::runtime_error(p.string() + ": not a qcreg-lambdas v1 file");
    std::vector<double> out;
    double v;
    while (in >> v)
        out.push_back(v);
    return out;
}

void write_csv(const fs::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream out = open_out(p);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 == header.size() ? '\n' : ',');
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << render(row[i]) << (i + 1 == row.size() ? '\n' : ',');
    }
}

}  // namespace qcreg::io
