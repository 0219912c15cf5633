#include "sessionflow/errors.hpp"
#include "sessionflow/ipv4.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sessionflow {
namespace {

TEST(Ipv4, ParsesBoundaryAddresses) {
    EXPECT_EQ(parse_ipv4("0.0.0.0").value, 0u);
    EXPECT_EQ(parse_ipv4("255.255.255.255").value, 4294967295u);
}

TEST(Ipv4, FirstOctetIsMostSignificant) {
    // 192*2^24 + 168*2^16 + 1*2^8 + 7
    EXPECT_EQ(testing::oracle_ipv4_value("192.168.1.7"), 3232235783u);
    EXPECT_EQ(parse_ipv4("192.168.1.7").value, 3232235783u);
}

TEST(Ipv4, RejectsMalformedText) {
    for (const char* bad : {"", "1.2.3", "1.2.3.4.5", "256.0.0.1", "1.2.3.-4", "a.b.c.d", "1..2.3", "1.2.3.4 ",
                            " 1.2.3.4", "1.2.3.4/8", "1234.1.1.1", "::1"}) {
        try {
            parse_ipv4(bad);
            ADD_FAILURE() << "accepted '" << bad << "'";
        } catch (const ParseError& e) {
            EXPECT_EQ(e.kind(), ErrorKind::MalformedAddress) << bad;
        }
    }
}

TEST(Ipv4, FormatParseRoundTripOnRandomValues) {
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 100'000; ++i) {
        const Ipv4Addr addr{static_cast<std::uint32_t>(rng())};
        const std::string text = format_ipv4(addr);
        ASSERT_EQ(parse_ipv4(text), addr) << text;
        ASSERT_EQ(testing::oracle_ipv4_value(text), addr.value);
    }
}

TEST(Cidr, ParsesAndNormalizes) {
    EXPECT_EQ(parse_cidr("10.0.0.0/8"), (CidrBlock{Ipv4Addr{167772160u}, 8}));
    EXPECT_EQ(parse_cidr("192.168.1.77/24"), (CidrBlock{Ipv4Addr{3232235776u}, 24}));
    EXPECT_EQ(parse_cidr("0.0.0.0/0"), (CidrBlock{Ipv4Addr{0u}, 0}));
    EXPECT_EQ(parse_cidr("255.255.255.255/0"), (CidrBlock{Ipv4Addr{0u}, 0}));
    EXPECT_EQ(parse_cidr("1.2.3.4/32"), (CidrBlock{parse_ipv4("1.2.3.4"), 32}));
}

TEST(Cidr, RejectsMalformedText) {
    for (const char* bad : {"10.0.0.0", "10.0.0.0/", "10.0.0.0/33", "10.0.0.0/-1", "10.0.0/8", "10.0.0.0/8/8",
                            "10.0.0.0/+8", "10.0.0.0/ 8", "x/8", "10.0.0.0/100"}) {
        try {
            parse_cidr(bad);
            ADD_FAILURE() << "accepted '" << bad << "'";
        } catch (const ParseError& e) {
            EXPECT_EQ(e.kind(), ErrorKind::MalformedCidr) << bad;
        }
    }
}

TEST(Cidr, NormalizationIsIdempotent) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10'000; ++i) {
        const CidrBlock raw{Ipv4Addr{static_cast<std::uint32_t>(rng())}, static_cast<int>(rng() % 33)};
        const CidrBlock once = raw.normalized();
        EXPECT_EQ(once.normalized(), once);
        EXPECT_EQ(parse_cidr(format_cidr(raw)), once);
        // host bits below the prefix are zero
        EXPECT_TRUE(testing::oracle_bits(once.network.value).substr(static_cast<std::size_t>(once.prefix_len)) ==
                    std::string(32 - static_cast<std::size_t>(once.prefix_len), '0'));
    }
}

}  // namespace
}  // namespace sessionflow
