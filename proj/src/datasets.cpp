#include "estlab/datasets.hpp"

#include <algorithm>

#include "estlab/errors.hpp"

namespace estlab {

bool DatasetDescriptor::has(std::string_view key) const {
    return std::any_of(constants.begin(), constants.end(), [&](const Constant& c) { return c.key == key; });
}

const Constant& DatasetDescriptor::constant(std::string_view key) const {
    for (const auto& c : constants) {
        if (c.key == key) return c;
    }
    fail(ErrorKind::unknown_id, "dataset " + id + " has no constant '" + std::string(key) + "'");
}

namespace {

DatasetDescriptor murthy_systematic() {
    const std::string cite = "Murthy (1967), Sampling Theory and Methods, pp. 131-132";
    DatasetDescriptor d;
    d.id = "ch1-murthy";
    d.title = "Timber volume and strip length, Blacks Mountain experimental forest (systematic sampling)";
    d.source = cite;
    d.constants = {
        {"N", 176, cite, ""},
        {"n", 16, cite, ""},
        {"meanY", 282.6136, cite, ""},
        {"meanX", 6.9943, cite, ""},
        {"S_Y2", 24114.67, cite, ""},
        {"S_X2", 8.76, cite, ""},
        {"rho", 0.871, cite, ""},
        {"S_Y2sq", 18086.0025, cite, "taken as 3/4 of S_Y2"},
        {"L", 2, cite, "inverse follow-up fraction used for the tabulated MSEs"},
        {"rhoY", -0.02095, "calibrated", "calibrated so the alpha = 4 row matches 1140.69 ... 1479.205", true},
        {"rhoX", -0.02095, "calibrated", "set equal to rhoY; the two are reported as approximately equal", true},
    };
    d.notes = {"Intraclass correlations are not printed; they are calibrated from the sample-mean row.",
               "Tabulated alpha = 4, W2 = 0.2 value 1253.13 breaks the constant W2 increment; read as a typo."};
    return d;
}

DatasetDescriptor pakistan_rice() {
    const std::string cite = "Government of Pakistan (2004), rice production in 73 districts";
    DatasetDescriptor d;
    d.id = "ch2-pakrice";
    d.title = "Rice production with two auxiliary attributes";
    d.source = cite;
    d.constants = {
        {"N", 73, cite, ""},
        {"meanY", 61.3, cite, ""},
        {"P1", 0.4247, cite, ""},
        {"P2", 0.3425, cite, ""},
        {"S_y2", 12371.4, cite, ""},
        {"S_phi1_2", 0.225490, cite, ""},
        {"S_phi2_2", 0.228311, cite, ""},
        {"rho_pb1", 0.621, cite, ""},
        {"rho_pb2", 0.673, cite, ""},
        {"rho_phi", 0.889, cite, ""},
    };
    d.notes = {"Sample size n is not printed; only t6 depends on it, so its table cell is fitted by sweeping n."};
    return d;
}

DatasetDescriptor aligarh_census() {
    const std::string cite = "Uttar Pradesh District Census Handbook (1981), Aligarh, 340 villages";
    DatasetDescriptor d;
    d.id = "ch3-aligarh";
    d.title = "Agricultural labourers (y) and village area (x)";
    d.source = cite;
    d.constants = {
        {"meanY", 73.76765, cite, ""},
        {"meanX", 2419.04, cite, ""},
        {"N", 340, cite, ""},
        {"n", 70, cite, ""},
        {"nPrime", 120, cite, ""},
        {"C02", 0.7614, cite, ""},
        {"C11", 0.2667, cite, ""},
        {"C03", 2.6942, cite, ""},
        {"C12#1", 0.0747, cite, "first of two values both printed as C12; used as C12"},
        {"C12#2", 0.1589, cite, "second of two values both printed as C12; used as C21"},
        {"C30", 0.7877, cite, ""},
        {"C13", 0.1321, cite, ""},
        {"C31", 0.8851, cite, ""},
        {"C04", 17.4275, cite, ""},
        {"C22", 0.8424, cite, ""},
        {"C40", 1.3051, cite, ""},
    };
    d.notes = {"C20 is not printed. Reproduction back-solves it from the common first-order MSE 39.217225."};
    return d;
}

DatasetDescriptor singh_pop1() {
    const std::string cite = "Singh (1969), p. 377";
    DatasetDescriptor d;
    d.id = "ch4-pop1";
    d.title = "Females employed (y), in service (x), educated (z)";
    d.source = cite;
    d.constants = {
        {"N", 61, cite, ""},
        {"n", 20, cite, ""},
        {"meanY", 7.46, cite, ""},
        {"meanX", 5.31, cite, ""},
        {"meanZ", 179, cite, ""},
        {"S_y2", 28.0818, cite, ""},
        {"S_x2", 16.1761, cite, ""},
        {"S_z2", 2028.1953, cite, ""},
        {"rho_xy", 0.7737, cite, ""},
        {"rho_yz", -0.2070, cite, ""},
        {"rho_zx", -0.0033, cite, ""},
    };
    return d;
}

DatasetDescriptor johnston_pop2() {
    const std::string cite = "Johnston (1972), p. 171";
    DatasetDescriptor d;
    d.id = "ch4-pop2";
    d.title = "Hives affected by disease (y), January temperature (x), flowering date (z)";
    d.source = cite;
    d.constants = {
        {"N", 10, cite, ""},
        {"n", 4, cite, ""},
        {"meanY", 52, cite, ""},
        {"meanX", 42, cite, ""},
        {"meanZ", 200, cite, ""},
        {"S_y2", 65.9776, cite, "raw data give 66"},
        {"S_x2", 29.9880, cite, "raw data give 30"},
        {"S_z2", 84, cite, "raw data give 83.333"},
        {"rho_xy", 0.8, cite, ""},
        {"rho_yz", -0.94, cite, ""},
        {"rho_zx", -0.073, cite, "raw data give -0.7333; the printed value drops a digit"},
    };
    PopulationColumns cols;
    cols.y = {49, 40, 41, 46, 52, 59, 53, 61, 55, 64};
    cols.x = std::vector<double>{35, 35, 38, 40, 40, 42, 44, 46, 50, 50};
    cols.z = std::vector<double>{200, 212, 211, 212, 203, 194, 194, 188, 196, 190};
    d.raw = cols;
    d.notes = {"Raw data are authoritative for covariances; the printed summary is kept for comparison."};
    return d;
}

DatasetDescriptor murthy_variance() {
    const std::string cite = "Murthy (1967), Sampling Theory and Methods";
    DatasetDescriptor d;
    d.id = "ch5-murthy67";
    d.title = "Standardized moments for variance estimation with two auxiliaries";
    d.source = cite;
    d.constants = {
        {"d400", 3.726, cite, ""},
        {"d040", 2.912, cite, ""},
        {"d004", 2.808, cite, "printed as d044; the only z-kurtosis slot it can fill is d004"},
        {"d022", 2.73, cite, ""},
        {"d202", 2.979, cite, ""},
        {"d220", 3.105, cite, ""},
        {"c_x", 0.5938, cite, ""},
        {"c_y", 0.7531, cite, ""},
        {"c_z", 0.7205, cite, ""},
        {"rho_yz", 0.904, cite, ""},
        {"rho_xy", 0.98, cite, ""},
        {"n", 7, cite, ""},
        {"nPrime", 15, cite, ""},
        {"meanX", 747.5882, cite, ""},
        {"meanY", 199.4412, cite, ""},
        {"meanZ", 208.8824, cite, ""},
    };
    return d;
}

const std::vector<DatasetDescriptor>& registry() {
    static const std::vector<DatasetDescriptor> all{murthy_systematic(), pakistan_rice(), aligarh_census(),
                                                    singh_pop1(),        johnston_pop2(), murthy_variance()};
    return all;
}

}  // namespace

const std::vector<std::string>& builtin_dataset_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& d : registry()) v.push_back(d.id);
        return v;
    }();
    return ids;
}

const DatasetDescriptor& builtin_dataset(std::string_view id) {
    for (const auto& d : registry()) {
        if (d.id == id) return d;
    }
    std::string known;
    for (const auto& k : builtin_dataset_ids()) known += (known.empty() ? "" : ", ") + k;
    fail(ErrorKind::unknown_id, "unknown dataset '" + std::string(id) + "' (known: " + known + ")");
}

SystematicInputs murthy_systematic_inputs() {
    const auto& d = builtin_dataset("ch1-murthy");
    SystematicInputs in;
    in.N = static_cast<int>(d.at("N"));
    in.n = static_cast<int>(d.at("n"));
    in.rhoY = d.at("rhoY");
    in.rhoX = d.at("rhoX");
    in.meanY = d.at("meanY");
    in.meanX = d.at("meanX");
    in.S_Y2 = d.at("S_Y2");
    in.S_X2 = d.at("S_X2");
    in.rho = d.at("rho");
    return in;
}

AttributeSummary pakrice_summary() {
    const auto& d = builtin_dataset("ch2-pakrice");
    PrintedAttributeSummary p;
    p.N = static_cast<std::size_t>(d.at("N"));
    p.meanY = d.at("meanY");
    p.varY = d.at("S_y2");
    p.P1 = d.at("P1");
    p.P2 = d.at("P2");
    p.varPhi1 = d.at("S_phi1_2");
    p.varPhi2 = d.at("S_phi2_2");
    p.rhoPb1 = d.at("rho_pb1");
    p.rhoPb2 = d.at("rho_pb2");
    p.rhoPhi = d.at("rho_phi");
    return attribute_summary_from_printed(p);
}

MomentTable aligarh_moments(double c20) {
    const auto& d = builtin_dataset("ch3-aligarh");
    MomentTable m;
    m.set(2, 0, c20);
    for (const char* key : {"C02", "C11", "C03", "C30", "C13", "C31", "C04", "C22", "C40"}) {
        m.set(key[1] - '0', key[2] - '0', d.at(key));
    }
    m.set(1, 2, d.at("C12#1"));
    m.set(2, 1, d.at("C12#2"));
    return m;
}

PartialMomentTable murthy67_moments() {
    const auto& d = builtin_dataset("ch5-murthy67");
    PartialMomentTable t;
    t.set(4, 0, 0, d.at("d400"));
    t.set(0, 4, 0, d.at("d040"));
    t.set(0, 0, 4, d.at("d004"));
    t.set(0, 2, 2, d.at("d022"));
    t.set(2, 0, 2, d.at("d202"));
    t.set(2, 2, 0, d.at("d220"));
    return t;
}

SummaryStats ch4_summary(std::string_view id, SummarySource source) {
    const auto& d = builtin_dataset(id);
    if (id != "ch4-pop1" && id != "ch4-pop2") fail(ErrorKind::unknown_id, "not a three-variable population: " + std::string(id));
    if (source == SummarySource::raw) {
        if (!d.raw) fail(ErrorKind::incomplete_input, "dataset " + d.id + " has no raw data");
        return summarize_numeric(FinitePopulation(*d.raw), Divisor::NMinus1);
    }
    PrintedSummary p;
    p.N = static_cast<std::size_t>(d.at("N"));
    p.meanY = d.at("meanY");
    p.meanX = d.at("meanX");
    p.meanZ = d.at("meanZ");
    p.varY = d.at("S_y2");
    p.varX = d.at("S_x2");
    p.varZ = d.at("S_z2");
    p.rhoYX = d.at("rho_xy");
    p.rhoYZ = d.at("rho_yz");
    p.rhoZX = d.at("rho_zx");
    if (source == SummarySource::printed_corrected && d.raw) {
        p.rhoZX = summarize_numeric(FinitePopulation(*d.raw), Divisor::NMinus1).rhoZX;
    }
    return summary_from_printed(p);
}

}  // namespace estlab
