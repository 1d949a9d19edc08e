#include "epibatch/fixtures.hpp"

#include <array>
#include <mutex>

namespace epibatch {

namespace {

struct RawRow { const char* date; std::int64_t c, nc, d, nd, a; };

constexpr std::array<RawRow, 20> k_new_york_rows{{
    {"2020-11-06", 559161, 3241, 457569, 721, 101592},
    {"2020-11-07", 562577, 3416, 458342, 773, 104235},
    {"2020-11-08", 565929, 3352, 459035, 693, 106894},
    {"2020-11-09", 569508, 3579, 459873, 838, 109635},
    {"2020-11-10", 573465, 3957, 460601, 728, 112864},
    {"2020-11-11", 578076, 4611, 461267, 666, 116809},
    {"2020-11-12", 583133, 5057, 461817, 550, 121316},
    {"2020-11-13", 588605, 5472, 462469, 652, 126136},
    {"2020-11-14", 593767, 5162, 463161, 692, 130606},
    {"2020-11-15", 597394, 3627, 464257, 1096, 133137},
    {"2020-11-16", 601457, 4063, 465006, 749, 136451},
    {"2020-11-17", 606624, 5167, 465711, 705, 140913},
    {"2020-11-18", 611988, 5364, 466524, 813, 145464},
    {"2020-11-19", 617741, 5753, 467298, 774, 150443},
    {"2020-11-20", 623242, 5501, 467354, 56, 155888},
    {"2020-11-21", 628808, 5566, 469471, 2117, 159337},
    {"2020-11-22", 634035, 5227, 470455, 984, 163580},
    {"2020-11-23", 640356, 6321, 471737, 1282, 168619},
    {"2020-11-24", 645834, 5478, 472576, 839, 173258},
    {"2020-11-25", 651830, 5996, 473349, 773, 178481},
}};

constexpr std::array<RawRow, 20> k_india_rows{{
    {"2020-11-01", 8229313, 45231, 7667405, 53781, 561908},
    {"2020-11-02", 8267623, 38310, 7726218, 58813, 541405},
    {"2020-11-03", 8313876, 46253, 7780089, 53871, 533787},
    {"2020-11-04", 8364086, 50210, 7836124, 56035, 527962},
    {"2020-11-05", 8411724, 47638, 7890951, 54827, 520773},
    {"2020-11-06", 8462080, 50356, 7945448, 54497, 516632},
    {"2020-11-07", 8507754, 45674, 7995089, 49641, 512665},
    {"2020-11-08", 8553657, 45903, 8043984, 48895, 509673},
    {"2020-11-09", 8591730, 38073, 8086465, 42481, 505265},
    {"2020-11-10", 8636011, 44281, 8141354, 54889, 494657},
    {"2020-11-11", 8683916, 47905, 8194622, 53268, 489294},
    {"2020-11-12", 8728795, 44879, 8244248, 49626, 484547},
    {"2020-11-13", 8773479, 44684, 8292760, 48512, 480719},
    {"2020-11-14", 8814579, 41100, 8335363, 42603, 479216},
    {"2020-11-15", 8845127, 30548, 8379649, 44286, 465478},
    {"2020-11-16", 8874290, 29163, 8420889, 41240, 453401},
    {"2020-11-17", 8912907, 38617, 8466102, 45213, 446805},
    {"2020-11-18", 8958483, 45576, 8515180, 49078, 443303},
    {"2020-11-19", 9004365, 45882, 8560571, 45391, 443794},
    {"2020-11-20", 9050597, 46232, 8610850, 50279, 439747},
}};

constexpr std::array<RawRow, 20> k_egypt_rows{{
    {"2020-11-01", 107736, 181, 105833, 115, 1903},
    {"2020-11-02", 107925, 189, 105943, 110, 1982},
    {"2020-11-03", 108122, 197, 106070, 127, 2052},
    {"2020-11-04", 108329, 207, 106192, 122, 2137},
    {"2020-11-05", 108530, 201, 106335, 143, 2195},
    {"2020-11-06", 108754, 224, 106449, 114, 2305},
    {"2020-11-07", 108962, 208, 106594, 145, 2368},
    {"2020-11-08", 109201, 239, 106710, 116, 2491},
    {"2020-11-09", 109422, 221, 106819, 109, 2603},
    {"2020-11-10", 109654, 232, 106934, 115, 2720},
    {"2020-11-11", 109881, 227, 107067, 133, 2814},
    {"2020-11-12", 110095, 214, 107177, 110, 2918},
    {"2020-11-13", 110319, 224, 107276, 99, 3043},
    {"2020-11-14", 110547, 228, 107388, 112, 3159},
    {"2020-11-15", 110767, 220, 107499, 111, 3268},
    {"2020-11-16", 111009, 242, 107644, 145, 3365},
    {"2020-11-17", 111284, 275, 107769, 125, 3515},
    {"2020-11-18", 111613, 329, 107916, 147, 3697},
    {"2020-11-19", 111955, 342, 108072, 156, 3883},
    {"2020-11-20", 112318, 363, 108206, 134, 4112},
}};

constexpr std::array<RawRow, 20> k_south_korea_rows{{
    {"2020-11-02", 26807, 75, 24982, 119, 1825},
    {"2020-11-03", 26925, 118, 25090, 108, 1835},
    {"2020-11-04", 27050, 125, 25210, 120, 1840},
    {"2020-11-05", 27195, 145, 25297, 87, 1898},
    {"2020-11-06", 27284, 89, 25387, 90, 1897},
    {"2020-11-07", 27427, 143, 25446, 59, 1981},
    {"2020-11-08", 27553, 126, 25509, 63, 2044},
    {"2020-11-09", 27653, 100, 25645, 136, 2008},
    {"2020-11-10", 27799, 146, 25753, 108, 2046},
    {"2020-11-11", 27942, 143, 25891, 138, 2051},
    {"2020-11-12", 28133, 191, 26025, 134, 2108},
    {"2020-11-13", 28338, 205, 26128, 103, 2210},
    {"2020-11-14", 28546, 208, 26184, 56, 2362},
    {"2020-11-15", 28769, 223, 26253, 69, 2516},
    {"2020-11-16", 28998, 229, 26354, 101, 2644},
    {"2020-11-17", 29311, 313, 26469, 115, 2842},
    {"2020-11-18", 29654, 343, 26596, 127, 3058},
    {"2020-11-19", 30017, 363, 26764, 168, 3253},
    {"2020-11-20", 30403, 386, 26868, 104, 3535},
    {"2020-11-21", 30733, 330, 26971, 103, 3762},
}};

constexpr std::array<RawRow, 20> k_italy_rows{{
    {"2020-11-11", 1028424, 32961, 415066, 9713, 613358},
    {"2020-11-12", 1066401, 37977, 431347, 16281, 635054},
    {"2020-11-13", 1107303, 40902, 443377, 12030, 663926},
    {"2020-11-14", 1144552, 37249, 456117, 12740, 688435},
    {"2020-11-15", 1178529, 33977, 466039, 9922, 712490},
    {"2020-11-16", 1205881, 27352, 488097, 22058, 717784},
    {"2020-11-17", 1238072, 32191, 504262, 16165, 733810},
    {"2020-11-18", 1272352, 34280, 529184, 24922, 743168},
    {"2020-11-19", 1308528, 36176, 546857, 17673, 761671},
    {"2020-11-20", 1345767, 37239, 568591, 21734, 777176},
    {"2020-11-21", 1380531, 34764, 588785, 20194, 791746},
    {"2020-11-22", 1408868, 28337, 602921, 14136, 805947},
    {"2020-11-23", 1431795, 22927, 634946, 32025, 796849},
    {"2020-11-24", 1455022, 23227, 656636, 21690, 798386},
    {"2020-11-25", 1480874, 25852, 689177, 32541, 791697},
    {"2020-11-26", 1509875, 29001, 714030, 24853, 795845},
    {"2020-11-27", 1538217, 28342, 750324, 36294, 787893},
    {"2020-11-28", 1564532, 26315, 775224, 24900, 789308},
    {"2020-11-29", 1585178, 20646, 789407, 14183, 795771},
    {"2020-11-30", 1601554, 16376, 813083, 23676, 788471},
}};

constexpr std::array<RawRow, 20> k_mexico_rows{{
    {"2020-11-13", 997393, 5558, 838964, 5711, 158429},
    {"2020-11-14", 1003253, 5860, 843620, 4656, 159633},
    {"2020-11-15", 1006522, 3269, 848732, 5112, 157790},
    {"2020-11-16", 1009396, 2874, 853061, 4329, 156335},
    {"2020-11-17", 1011153, 1757, 856977, 3916, 154176},
    {"2020-11-18", 1015071, 3918, 861553, 4576, 153518},
    {"2020-11-19", 1019543, 4472, 866465, 4912, 153078},
    {"2020-11-20", 1025969, 6426, 871551, 5086, 154418},
    {"2020-11-21", 1032688, 6719, 872101, 550, 160587},
    {"2020-11-22", 1041875, 9187, 880780, 8679, 161095},
    {"2020-11-23", 1049358, 7483, 886619, 5839, 162739},
    {"2020-11-24", 1060152, 10794, 894255, 7636, 165897},
    {"2020-11-25", 1070487, 10335, 901634, 7379, 168853},
    {"2020-11-26", 1078594, 8107, 907823, 6189, 170771},
    {"2020-11-27", 1089998, 11404, 908431, 608, 181567},
    {"2020-11-28", 1101403, 11405, 909040, 609, 192363},
    {"2020-11-29", 1107071, 5668, 924052, 15012, 183019},
    {"2020-11-30", 1113543, 6472, 929526, 5474, 184017},
    {"2020-12-01", 1122362, 8819, 936582, 7056, 185780},
    {"2020-12-02", 1133613, 11251, 944132, 7550, 189481},
}};

DailySeries make_series(std::span<const RawRow> raw) {
  std::vector<DailyRow> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) {
    rows.push_back({r.date, r.c, r.nc, r.d, r.nd, r.a});
  }
  return DailySeries(std::move(rows));
}

std::vector<CountryFixture> build_fixtures() {
  std::vector<CountryFixture> fixtures;
  fixtures.push_back({
      "new-york",
      "New York State",
      make_series(k_new_york_rows),
      101592,
      std::nullopt,
      {
          {1, 0.035073852, 0.006084398, {{1, 0.971}, {2, 0.029}}},
      },
      178481});
  fixtures.push_back({
      "india",
      "India",
      make_series(k_india_rows),
      561908,
      std::nullopt,
      {
          {1, 0.088146484, 0.101284201, {{0, 0.001}, {1, 0.999}}},
      },
      439747});
  fixtures.push_back({
      "egypt",
      "Egypt",
      make_series(k_egypt_rows),
      1903,
      std::nullopt,
      {
          {1, 0.085434063, 0.045978143, {{1, 0.946}, {2, 0.054}}},
      },
      4112});
  fixtures.push_back({
      "south-korea",
      "South Korea",
      make_series(k_south_korea_rows),
      1825,
      11,
      {
          {1, 0.062135947, 0.053096363, {{1, 0.94}, {2, 0.06}}},
          {11, 0.09774732, 0.038994525, {{1, 0.434}, {2, 0.566}}},
      },
      3762});
  fixtures.push_back({
      "italy",
      "Italy",
      make_series(k_italy_rows),
      613358,
      12,
      {
          {1, 0.049487386, 0.023181119, {{1, 0.999}, {2, 0.001}}},
          {12, 0.030904889, 0.031409968, {{0, 0.55}, {1, 0.45}}},
      },
      788471});
  fixtures.push_back({
      "mexico",
      "Mexico",
      make_series(k_mexico_rows),
      158429,
      7,
      {
          {1, 0.027329732, 0.030691817, {{0, 0.02}, {1, 0.98}}},
          {7, 0.051140063, 0.034605204, {{1, 0.5}, {2, 0.5}}},
      },
      189481});
  return fixtures;
}

const std::vector<CountryFixture>& fixtures_singleton() {
  static const std::vector<CountryFixture> fixtures = build_fixtures();
  return fixtures;
}

}  // namespace

RegimeSchedule CountryFixture::schedule(RateConvention convention) const {
  RegimeSchedule result;
  result.initial_count = initial_active;
  for (const auto& r : regimes) {
    result.regimes.push_back(
        Regime{r.start_day,
               RegimeParameters{r.lambda_reported, r.mu_reported, 0.0, convention},
               GroupMixture(r.groups, /*allow_pure_decay=*/true)});
  }
  result.validate();
  return result;
}

const CountryFixture& fixture(std::string_view key) {
  for (const auto& f : fixtures_singleton()) {
    if (f.key == key) return f;
  }
  throw ValidationError("unknown fixture country: " + std::string(key) +
                        " (expected new-york|india|egypt|south-korea|italy|mexico)");
}

std::span<const CountryFixture> all_fixtures() { return fixtures_singleton(); }

}  // namespace epibatch
