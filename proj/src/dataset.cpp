//---------------------------------------------------------------------------//
//! \file dataset.cpp
//---------------------------------------------------------------------------//
#include "rsp/dataset.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rsp
{
namespace
{
constexpr char const* column_header = "theta_rel,x_a,x_b";

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string trim(std::string s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
    {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string const& text, double& value)
{
    auto const t = trim(text);
    if (t.empty())
    {
        return false;
    }
    auto const* begin = t.data();
    auto const* end = t.data() + t.size();
    auto const [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc{} && ptr == end && std::isfinite(value);
}

}  // namespace

std::string Dataset::meta(std::string const& key) const
{
    for (auto const& [k, v] : metadata)
    {
        if (k == key)
        {
            return v;
        }
    }
    return {};
}

Dataset make_dataset(SimConfig const& config,
                     std::vector<QuadratureSample> samples)
{
    Dataset data;
    data.metadata = {
        {"alpha2", format_number(config.alpha2)},
        {"eta", format_number(config.eta)},
        {"seed", std::to_string(config.seed)},
        {"generator", std::string(Rng::generator_name)},
        {"n", std::to_string(samples.size())},
    };
    data.samples = std::move(samples);
    return data;
}

void write_dataset(std::ostream& os, Dataset const& data)
{
    for (auto const& [k, v] : data.metadata)
    {
        os << "# " << k << '=' << v << '\n';
    }
    os << column_header << '\n';
    for (auto const& s : data.samples)
    {
        os << format_number(s.theta_rel) << ',' << format_number(s.x_a) << ','
           << format_number(s.x_b) << '\n';
    }
}

std::string format_dataset(Dataset const& data)
{
    std::ostringstream os;
    write_dataset(os, data);
    return os.str();
}

Dataset read_dataset(std::istream& is)
{
    Dataset data;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(is, line))
    {
        ++lineno;
        auto const t = trim(line);
        if (t.empty())
        {
            continue;
        }
        if (t.front() == '#')
        {
            auto const body = trim(t.substr(1));
            auto const eq = body.find('=');
            if (eq != std::string::npos)
            {
                data.metadata.emplace_back(trim(body.substr(0, eq)),
                                           trim(body.substr(eq + 1)));
            }
            continue;
        }
        if (!have_header)
        {
            if (t != column_header)
            {
                throw DataError("line " + std::to_string(lineno)
                                + ": expected header '" + column_header
                                + "'");
            }
            have_header = true;
            continue;
        }
        std::array<double, 3> v{};
        std::size_t start = 0;
        for (int col = 0; col < 3; ++col)
        {
            auto const comma = t.find(',', start);
            bool const last = col == 2;
            if (last != (comma == std::string::npos))
            {
                throw DataError("line " + std::to_string(lineno)
                                + ": expected 3 comma-separated values");
            }
            auto const field = t.substr(start, last ? std::string::npos
                                                    : comma - start);
            if (!parse_double(field, v[col]))
            {
                throw DataError("line " + std::to_string(lineno)
                                + ": invalid number '" + field + "'");
            }
            start = comma + 1;
        }
        data.samples.push_back({v[0], v[1], v[2]});
    }
    if (!have_header)
    {
        throw DataError("dataset has no column header");
    }
    return data;
}

Dataset read_dataset(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw DataError("cannot open dataset " + path.string());
    }
    return read_dataset(in);
}

void write_file_atomic(std::filesystem::path const& path,
                       std::string const& contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
        {
            throw DataError("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out)
        {
            throw DataError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp);
        throw DataError("cannot rename " + tmp.string() + " to "
                        + path.string() + ": " + ec.message());
    }
}

//---------------------------------------------------------------------------//
}  // namespace rsp
