#include <doctest.h>

#include <algorithm>

#include "rares/secureboot.hpp"
#include "support/generators.hpp"
#include "support/openssl_oracle.hpp"

using namespace rares;

namespace {

const MemoryLayout kLayout = MemoryLayout::defaults();

struct Fixture {
  testing::Rng rng{2024};
  Bytes key = testing::random_bytes(rng, 32);
  Bytes golden = testing::random_bytes(rng, kLayout.region(RegionKind::Flash).size());
  DeviceState device = secureboot::provision(kLayout, key, golden);
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "provision") {
  CHECK(std::ranges::equal(device.key(), key));
  CHECK(std::ranges::equal(device.golden_bytes(), golden));
  CHECK(std::ranges::equal(device.bytes(RegionKind::Flash), golden));
  CHECK(device.reference_digest == testing::openssl_hmac_sha256(key, golden));
  CHECK_THROWS_AS(secureboot::provision(kLayout, Bytes(31), golden), ProvisioningError);
  CHECK_THROWS_AS(secureboot::provision(kLayout, key, Bytes(100)), ProvisioningError);
}

TEST_CASE_FIXTURE(Fixture, "verify_flash") {
  SUBCASE("clean flash matches the reference") {
    auto check = secureboot::verify_flash(device);
    CHECK(check.ok);
    CHECK(check.digest == device.reference_digest);
  }
  SUBCASE("one flipped bit fails, digest matches the oracle") {
    const std::size_t offset = rng() % golden.size();
    device.bytes(RegionKind::Flash)[offset] ^= static_cast<Byte>(1u << (rng() % 8));
    auto check = secureboot::verify_flash(device);
    CHECK_FALSE(check.ok);
    CHECK(check.digest == testing::openssl_hmac_sha256(key, device.bytes(RegionKind::Flash)));
    CHECK(check.digest != device.reference_digest);
  }
  SUBCASE("all-zero flash against a non-zero golden image") {
    std::ranges::fill(device.bytes(RegionKind::Flash), Byte{0});
    auto check = secureboot::verify_flash(device);
    CHECK_FALSE(check.ok);
    CHECK(check.digest == testing::openssl_hmac_sha256(key, Bytes(golden.size(), 0)));
  }
}

TEST_CASE_FIXTURE(Fixture, "reflash") {
  SUBCASE("restores corrupted flash and clears the latches") {
    device.bytes(RegionKind::Flash)[10] ^= 0xFF;
    device.ctrl.latch(ViolationSet(0x0044));
    device.chip_gate_active = true;
    device.cpu_halted = true;
    secureboot::reflash(device);
    CHECK(std::ranges::equal(device.bytes(RegionKind::Flash), golden));
    CHECK(device.ctrl.value() == 0x0000);
    CHECK_FALSE(device.chip_gate_active);
    CHECK_FALSE(device.cpu_halted);
  }
  SUBCASE("idempotent on clean flash") {
    const DeviceState before = device;
    secureboot::reflash(device);
    CHECK(device == before);
  }
}

TEST_CASE_FIXTURE(Fixture, "fsbl_boot outcomes") {
  SUBCASE("clean") {
    auto report = secureboot::fsbl_boot(device);
    CHECK(report.outcome == BootOutcome::VerifiedClean);
    CHECK(report.attempt_count() == 1);
    CHECK_FALSE(device.boot_failed);
  }
  SUBCASE("tampered flash, intact golden") {
    device.bytes(RegionKind::Flash)[0] ^= 0x01;
    auto report = secureboot::fsbl_boot(device);
    CHECK(report.outcome == BootOutcome::RecoveredThenVerified);
    CHECK(report.attempt_count() == 2);
    CHECK_FALSE(report.attempts[0].matched);
    CHECK(report.attempts[1].matched);
    CHECK(report.attempts[1].computed == report.attempts[1].reference);
    CHECK(std::ranges::equal(device.bytes(RegionKind::Flash), golden));
  }
  SUBCASE("tampered flash and mismatched reference digest") {
    device.bytes(RegionKind::Flash)[0] ^= 0x01;
    device.reference_digest[0] ^= 0x01;
    auto report = secureboot::fsbl_boot(device);
    CHECK(report.outcome == BootOutcome::Unrecoverable);
    CHECK(report.attempt_count() == 2);
    // both computed digests disagree with the reference, per the oracle
    Bytes flipped = golden;
    flipped[0] ^= 0x01;
    CHECK(report.attempts[0].computed == testing::openssl_hmac_sha256(key, flipped));
    CHECK(report.attempts[1].computed == testing::openssl_hmac_sha256(key, golden));
    CHECK(report.attempts[0].computed != device.reference_digest);
    CHECK(report.attempts[1].computed != device.reference_digest);
    CHECK(device.boot_failed);
  }
}

TEST_CASE_FIXTURE(Fixture, "fsbl_boot is deterministic") {
  device.bytes(RegionKind::Flash)[5] ^= 0x20;
  DeviceState a = device;
  DeviceState b = device;
  auto ra = secureboot::fsbl_boot(a);
  auto rb = secureboot::fsbl_boot(b);
  CHECK(a == b);
  CHECK(ra.outcome == rb.outcome);
  CHECK(ra.attempts.size() == rb.attempts.size());
  for (std::size_t i = 0; i < ra.attempts.size(); ++i) CHECK(ra.attempts[i].computed == rb.attempts[i].computed);
}
