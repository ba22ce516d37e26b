#include <doctest.h>

#include "support.hpp"

TEST_CASE("property batches over 200 generated inputs") {
    for (const auto& o : bibscreen::testing::property_batches(200)) {
        CAPTURE(o.name);
        CAPTURE(o.first_failure);
        CHECK(o.cases >= 200);
        CHECK(o.failures == 0);
    }
}
