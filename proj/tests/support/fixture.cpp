#include "fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "povml/rng.hpp"
#include "povml/schema.hpp"

namespace povml::testing {

namespace {

// Marks `count` distinct rows, excluding any row already marked in `avoid`.
std::vector<unsigned char> pick_rows(std::size_t n, std::size_t count, Rng& rng,
                                     const std::vector<unsigned char>* avoid = nullptr) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < n; ++i)
        if (!avoid || !(*avoid)[i]) pool.push_back(i);
    rng.shuffle(pool);
    std::vector<unsigned char> mask(n, 0);
    for (std::size_t i = 0; i < count && i < pool.size(); ++i) mask[pool[i]] = 1;
    return mask;
}

double gaussian(Rng& rng, double mean, double sd) {
    // Box-Muller with the deterministic generator
    const double u1 = std::max(rng.unit(), 1e-12);
    const double u2 = rng.unit();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::string format_num(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::ostringstream out;
        out << static_cast<long long>(v);
        return out.str();
    }
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

}  // namespace

FixtureSpec small_fixture_spec() {
    FixtureSpec spec;
    spec.n_rows = 400;
    spec.class_counts = {{1, 32}, {2, 67}, {3, 51}, {4, 250}};
    spec.urban_count = 286;
    spec.missing_v2a1 = 287;
    spec.missing_v18q1 = 307;
    spec.missing_dependency = 92;
    spec.missing_edjefe = 5;
    spec.missing_edjefa = 3;
    spec.missing_meaneduc = 2;
    spec.roof_dropped = 4;
    spec.electricity_dropped = 2;
    spec.education_dropped = 1;
    return spec;
}

std::string make_fixture_csv(const FixtureSpec& spec) {
    const std::size_t n = spec.n_rows;
    Rng rng(spec.seed);

    // labels with exact counts, shuffled over rows
    std::vector<int> label;
    label.reserve(n);
    for (const auto& [cls, count] : spec.class_counts)
        label.insert(label.end(), count, cls);
    rng.shuffle(label);

    std::vector<unsigned char> urban = pick_rows(n, spec.urban_count, rng);
    std::vector<unsigned char> miss_v2a1 = pick_rows(n, spec.missing_v2a1, rng);
    std::vector<unsigned char> miss_v18q1 = pick_rows(n, spec.missing_v18q1, rng);
    std::vector<unsigned char> miss_dep = pick_rows(n, spec.missing_dependency, rng);
    std::vector<unsigned char> miss_edjefe = pick_rows(n, spec.missing_edjefe, rng);
    std::vector<unsigned char> miss_edjefa = pick_rows(n, spec.missing_edjefa, rng);
    std::vector<unsigned char> miss_meaneduc = pick_rows(n, spec.missing_meaneduc, rng);

    // disjoint all-zero group rows
    std::vector<unsigned char> taken(n, 0);
    std::vector<unsigned char> roof_zero = pick_rows(n, spec.roof_dropped, rng, &taken);
    for (std::size_t i = 0; i < n; ++i) taken[i] |= roof_zero[i];
    std::vector<unsigned char> elec_zero = pick_rows(n, spec.electricity_dropped, rng, &taken);
    for (std::size_t i = 0; i < n; ++i) taken[i] |= elec_zero[i];
    std::vector<unsigned char> edu_zero = pick_rows(n, spec.education_dropped, rng, &taken);

    const Schema& schema = Schema::canonical();
    std::ostringstream out;
    for (std::size_t c = 0; c < schema.size(); ++c)
        out << (c ? "," : "") << schema.at(c).name;
    out << "\n";

    // class-conditional centers for the informative numerics
    auto meaneduc_mean = [](int cls) { return 2.5 + 3.2 * cls; };
    auto escolari_mean = [](int cls) { return 2.0 + 2.0 * cls; };

    std::vector<std::string> row(schema.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = label[i];

        auto set = [&](const char* name, const std::string& value) {
            row[*schema.find(name)] = value;
        };
        auto seti = [&](const char* name, long long value) {
            row[*schema.find(name)] = std::to_string(value);
        };

        const double meaneduc = std::max(0.0, gaussian(rng, meaneduc_mean(cls), 2.0));
        const double escolari =
            std::max(0.0, std::floor(gaussian(rng, escolari_mean(cls), 2.5)));
        const int rooms = 1 + static_cast<int>(rng.below(9));
        const int r4h1 = static_cast<int>(rng.below(4));
        const int r4h2 = 1 + static_cast<int>(rng.below(3));
        const int r4m1 = static_cast<int>(rng.below(4));
        const int r4m2 = 1 + static_cast<int>(rng.below(3));
        const int r4h3 = r4h1 + r4h2;
        const int r4m3 = r4m1 + r4m2;
        const int household = r4h3 + r4m3;
        const double overcrowding =
            static_cast<double>(household) / static_cast<double>(rooms);
        const int age = static_cast<int>(rng.below(101));
        const int edjefe_years =
            std::max(0, static_cast<int>(std::floor(gaussian(rng, 2.0 + 1.5 * cls, 3.0))));
        const int edjefa_years =
            std::max(0, static_cast<int>(std::floor(gaussian(rng, 1.5 + 1.2 * cls, 3.0))));

        seti("hacdor", rng.below(10) == 0 ? 1 : 0);
        seti("Rooms", rooms);
        seti("hacapo", rng.below(12) == 0 ? 1 : 0);
        seti("v14a", rng.below(20) == 0 ? 0 : 1);
        seti("Refrig", (cls == 4 ? rng.below(10) > 0 : rng.below(10) > 4) ? 1 : 0);
        seti("v18q", rng.below(3) == 0 ? 1 : 0);
        seti("r4h1", r4h1);
        seti("r4h2", r4h2);
        seti("r4h3", r4h3);
        seti("r4m1", r4m1);
        seti("r4m2", r4m2);
        seti("r4m3", r4m3);
        seti("r4t1", r4h1 + r4m1);
        seti("r4t2", r4h2 + r4m2);
        seti("r4t3", household);
        seti("tamhog", household);
        seti("tamviv", household + static_cast<int>(rng.below(2)));
        seti("escolari", static_cast<long long>(escolari));
        seti("rez_esc", static_cast<long long>(rng.below(6)));
        seti("Hhsize", household);
        set("Id", "ID_" + std::to_string(i + 1));
        set("idhogar", "\"hh" + std::to_string(i / 3 + 1) + "\"");  // quoted on purpose
        seti("hogar_nin", r4h1 + r4m1);
        seti("hogar_adul", r4h2 + r4m2);
        seti("hogar_mayor", static_cast<long long>(rng.below(3)));
        seti("hogar_total", household);
        seti("bedrooms", 1 + static_cast<int>(rng.below(5)));
        set("overcrowding", format_num(overcrowding));
        seti("computer", (cls >= 3 ? rng.below(3) > 0 : rng.below(4) == 0) ? 1 : 0);
        seti("television", rng.below(5) > 0 ? 1 : 0);
        seti("mobilephone", rng.below(10) > 0 ? 1 : 0);
        seti("qmobilephone", static_cast<long long>(rng.below(5)));
        seti("Age", age);
        seti("Dis", rng.below(15) == 0 ? 1 : 0);
        seti("cielorazo", (cls >= 3 ? rng.below(4) > 0 : rng.below(2) == 0) ? 1 : 0);
        seti("Target", cls);

        // v2a1 / v18q1: mostly missing columns
        set("v2a1", miss_v2a1[i] ? "" : format_num(50000.0 + 40000.0 * cls + 10000.0 * rng.unit()));
        set("v18q1", miss_v18q1[i] ? "" : std::to_string(rng.below(3) + 1));

        // dependency / Edjefe / Edjefa carry yes/no tokens among the numbers
        if (miss_dep[i]) {
            set("dependency", "");
        } else {
            const std::size_t style = rng.below(10);
            if (style == 0)
                set("dependency", "yes");
            else if (style == 1)
                set("dependency", "no");
            else
                set("dependency", format_num(std::round(rng.unit() * 800.0) / 100.0));
        }
        if (miss_edjefe[i]) {
            set("Edjefe", "");
        } else if (edjefe_years == 0 && rng.below(2) == 0) {
            set("Edjefe", "no");
        } else {
            seti("Edjefe", edjefe_years);
        }
        if (miss_edjefa[i]) {
            set("Edjefa", "");
        } else if (edjefa_years == 0 && rng.below(2) == 0) {
            set("Edjefa", "no");
        } else {
            seti("Edjefa", edjefa_years);
        }
        set("meaneduc", miss_meaneduc[i] ? "" : format_num(std::round(meaneduc * 100.0) / 100.0));

        // squared transforms (dropped by the default plan, but kept faithful)
        seti("SQBescolari", static_cast<long long>(escolari * escolari));
        seti("SQBage", static_cast<long long>(age) * age);
        seti("SQBhogar_total", static_cast<long long>(household) * household);
        seti("SQBedjefe", static_cast<long long>(edjefe_years) * edjefe_years);
        seti("SQBhogar_nin", static_cast<long long>(r4h1 + r4m1) * (r4h1 + r4m1));
        set("SQBovercrowding", format_num(overcrowding * overcrowding));
        set("SQBdependency", format_num(rng.unit() * 64.0));
        set("SQBmeaned",
            miss_meaneduc[i] ? "" : format_num(std::round(meaneduc * meaneduc * 100.0) / 100.0));
        seti("Agesq", static_cast<long long>(age) * age);

        // one-hot groups; wall/floor quality lean on the class for signal
        auto group = [&](std::initializer_list<const char*> names, std::size_t pick) {
            std::size_t idx = 0;
            for (const char* name : names) {
                seti(name, idx == pick ? 1 : 0);
                ++idx;
            }
        };
        group({"paredblolad", "paredzocalo", "paredpreb", "pareddes", "paredmad", "paredzinc",
               "paredfibras", "paredother"},
              cls == 4 ? rng.below(3) : rng.below(8));
        group({"pisomoscer", "pisocemento", "pisooother", "pcionatur", "pcionotiene",
               "pisomadera"},
              cls >= 3 ? rng.below(2) : 1 + rng.below(5));
        if (roof_zero[i]) {
            group({"techozinc", "techoentrepiso", "techocane", "techootro"}, 99);  // all zero
        } else {
            group({"techozinc", "techoentrepiso", "techocane", "techootro"}, rng.below(4));
        }
        group({"abastaguadentro", "abastaguafuera", "abastaguano"}, rng.below(3));
        if (elec_zero[i]) {
            group({"Public", "planpri", "noelec", "coopele"}, 99);
        } else {
            group({"Public", "planpri", "noelec", "coopele"}, rng.below(4));
        }
        group({"sanitario1", "sanitario2", "sanitario3", "sanitario5", "sanitario6"},
              rng.below(5));
        group({"energcocinar1", "energcocinar2", "energcocinar3", "energcocinar4"},
              rng.below(4));
        group({"elimbasu1", "elimbasu2", "elimbasu3", "elimbasu4", "elimbasu5", "elimbasu6"},
              rng.below(6));
        group({"epared1", "epared2", "epared3"}, cls >= 3 ? 1 + rng.below(2) : rng.below(2));
        group({"etecho1", "etecho2", "etecho3"}, cls >= 3 ? 1 + rng.below(2) : rng.below(2));
        group({"eviv1", "eviv2", "eviv3"}, cls >= 3 ? 1 + rng.below(2) : rng.below(2));
        group({"Male", "female"}, rng.below(2));
        group({"estadocivil1", "estadocivil2", "estadocivil3", "estadocivil4", "estadocivil5",
               "estadocivil6", "estadocivil7"},
              rng.below(7));
        group({"parentesco1", "parentesco2", "parentesco3", "parentesco4", "parentesco5",
               "parentesco6", "parentesco7", "parentesco8", "parentesco9", "parentesco10",
               "parentesco11", "parentesco12"},
              rng.below(12));
        if (edu_zero[i]) {
            group({"instlevel1", "instlevel2", "instlevel3", "instlevel4", "instlevel5",
                   "instlevel6", "instlevel7", "instlevel8", "instlevel9"},
                  99);
        } else {
            group({"instlevel1", "instlevel2", "instlevel3", "instlevel4", "instlevel5",
                   "instlevel6", "instlevel7", "instlevel8", "instlevel9"},
                  cls >= 3 ? 2 + rng.below(7) : rng.below(4));
        }
        group({"tipovivi1", "tipovivi2", "tipovivi3", "tipovivi4", "tipovivi5"}, rng.below(5));
        group({"lugar1", "lugar2", "lugar3", "lugar4", "lugar5", "lugar6"}, rng.below(6));
        seti("area1", urban[i] ? 1 : 0);
        seti("area2", urban[i] ? 0 : 1);

        for (std::size_t c = 0; c < schema.size(); ++c) {
            out << (c ? "," : "") << row[c];
            row[c].clear();
        }
        out << "\n";
    }
    return out.str();
}

void write_fixture(const std::string& path, const FixtureSpec& spec) {
    std::ofstream out(path, std::ios::binary);
    out << make_fixture_csv(spec);
}

}  // namespace povml::testing
