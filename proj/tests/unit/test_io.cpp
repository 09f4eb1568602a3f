#include "recommerce/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace recommerce;
using namespace recommerce::io;

TEST(Io, FormatNumberTwelveDigits)
{
    EXPECT_EQ(format_number(0.1238746759324309), "0.123874675932");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(std::nan("")), "");
}

TEST(Io, ParseFullConfig)
{
    const auto cfg = parse_config(R"({
      "schema": "recommerce.config/1",
      "params": {"v_low": 0.75, "alpha": 0.95,
                 "cost": {"family": "power", "c0": 1.0, "p": 3},
                 "quality": {"family": "rational", "k": 2}},
      "model": "olg", "regime": "branded",
      "solver": {"d_max": 5},
      "sweep": {"parameter": "beta", "from": 0, "to": 0.5, "steps": 6},
      "verify": {"seed": 9, "draws": 10},
      "output": {"dir": "results", "formats": ["csv"]}
    })");
    EXPECT_EQ(cfg.params.v_low, 0.75);
    EXPECT_EQ(cfg.params.alpha, 0.95);
    EXPECT_EQ(cfg.params.beta, 0.2);
    ASSERT_TRUE(std::holds_alternative<PowerCost>(cfg.params.cost));
    EXPECT_EQ(std::get<PowerCost>(cfg.params.cost).p, 3.0);
    ASSERT_TRUE(std::holds_alternative<RationalQuality>(cfg.params.quality));
    EXPECT_EQ(cfg.model, ModelKind::Olg);
    EXPECT_EQ(cfg.regime, RegimeSelector::Branded);
    EXPECT_EQ(cfg.solver.d_max, 5.0);
    ASSERT_TRUE(cfg.sweep.has_value());
    EXPECT_EQ(cfg.sweep->parameter, statics::Parameter::Beta);
    EXPECT_EQ(cfg.sweep->steps, 6);
    EXPECT_EQ(*cfg.verify.seed, 9u);
    EXPECT_EQ(*cfg.output.dir, "results");
    EXPECT_TRUE(cfg.output.csv);
    EXPECT_FALSE(cfg.output.json);
}

TEST(Io, RejectsUnknownKeysAtEveryLevel)
{
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","extra":1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","params":{"gamma":1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","params":{"cost":{"family":"power","q":1}}})"),
                 ConfigError);
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","verify":{"seeds":1}})"), ConfigError);
}

TEST(Io, RequiresSchema)
{
    EXPECT_THROW(parse_config(R"({"params":{}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/2"})"), ConfigError);
    EXPECT_THROW(parse_config("not json"), ConfigError);
    EXPECT_NO_THROW(parse_config(R"({"schema":"recommerce.config/1"})"));
}

TEST(Io, TypeErrors)
{
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","params":{"alpha":"high"}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","sweep":{"parameter":"alpha","from":0,"to":1,"steps":2.5}})"),
                 ConfigError);
    EXPECT_THROW(parse_config(R"({"schema":"recommerce.config/1","regime":"neither"})"), ConfigError);
}

TEST(Io, VerifySeedMandatory)
{
    VerifySpec v;
    EXPECT_THROW(v.resolve({}), ConfigError);
    v.seed = 3;
    v.draws = 5;
    const auto cfg = v.resolve({});
    EXPECT_EQ(cfg.seed, 3u);
    EXPECT_EQ(cfg.draws, 5);
}

TEST(Io, TwoPeriodCsvColumns)
{
    const auto eq = two_period::solve(canonical_params(), Regime::Branded);
    const auto csv = two_period_csv({eq});
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "regime,market_mode,D_star,D_social,p1n,p2n,p2u,profit_total,commission_revenue,welfare");
    EXPECT_EQ(row.rfind("branded,active,0.1238746759", 0), 0u) << row;
}

TEST(Io, SweepCsvColumns)
{
    const auto rep = statics::monotonicity_sweep(canonical_params(), ModelKind::TwoPeriod, Regime::ThirdParty,
                                                 statics::Parameter::Alpha, statics::linspace(0.8, 0.9, 3));
    const auto csv = sweep_csv({rep});
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "param_value,regime,D_star,profit,welfare,envelope_deriv,fd_deriv,market_mode");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Io, JsonNumbersRounded)
{
    const auto eq = two_period::solve(canonical_params(), Regime::ThirdParty);
    const auto json = two_period_json(canonical_params(), {eq});
    EXPECT_NE(json.find("\"D_star\": 0.067312983"), std::string::npos) << json;
}

TEST(Io, WriteFileCreatesDirectories)
{
    const auto dir = std::filesystem::temp_directory_path() / "recommerce_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    write_file(dir / "a.txt", "hello");
    std::ifstream in(dir / "a.txt");
    std::string s;
    in >> s;
    EXPECT_EQ(s, "hello");
    std::filesystem::remove_all(dir.parent_path());
}
