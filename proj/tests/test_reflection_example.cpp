#include <gtest/gtest.h>

#include <sstream>

#include "galg/reflection_example.hpp"
#include "galg/report.hpp"

using namespace galg;

TEST(ReflectionExample, AllIdentitiesHold) {
    const AxiomReport r = verify_paper();
    ASSERT_EQ(r.checks().size(), 10u);
    const std::vector<std::string> names{"transformed-system", "factorization", "gram",        "determinant",
                                         "gram-inverse",       "left-inverse",  "reduction-inverse",
                                         "composition",        "bracket",       "induced-anchor"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        EXPECT_EQ(r.checks()[i].name, names[i]);
        EXPECT_TRUE(r.checks()[i].pass) << names[i] << ": " << r.checks()[i].witness;
    }
}

TEST(ReflectionExample, MutatedReductionBreaksLeftInverse) {
    ReflectionExample d = reflection_example();
    d.reduction_r(2, 0) = 2;
    const AxiomReport r = verify_paper(d);
    EXPECT_FALSE(r.at("left-inverse").pass);
    EXPECT_NE(r.at("left-inverse").witness.find("residual"), std::string::npos);
    EXPECT_TRUE(r.at("factorization").pass);
}

TEST(ReflectionExample, MutatedPrintedInverseIsCaught) {
    ReflectionExample d = reflection_example();
    d.reduction_inverse(0, 0) = 0;
    EXPECT_FALSE(verify_paper(d).at("reduction-inverse").pass);
    d = reflection_example();
    d.anchor_p(1, 2) = 2;
    const AxiomReport r = verify_paper(d);
    EXPECT_FALSE(r.at("factorization").pass);
}

TEST(ReflectionExample, Deterministic) {
    std::ostringstream a, b;
    write_json(a, verify_paper());
    write_json(b, verify_paper());
    EXPECT_EQ(a.str(), b.str());
}

TEST(Report, JsonMirrorsText) {
    AxiomReport r;
    r.add({"one", true, {}});
    r.add({"two", false, "residual -t2"});
    const nlohmann::json j = to_json(r);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 2u);
    for (const auto& e : j) {
        EXPECT_EQ(e.size(), 3u);
        EXPECT_TRUE(e.at("check").is_string());
        EXPECT_TRUE(e.at("pass").is_boolean());
        EXPECT_TRUE(e.at("witness").is_string());
    }
    EXPECT_EQ(j[1]["witness"], "residual -t2");
    std::ostringstream text;
    write_text(text, r);
    EXPECT_EQ(text.str(), "PASS one\nFAIL two: residual -t2\n1/2 checks passed\n");
}
