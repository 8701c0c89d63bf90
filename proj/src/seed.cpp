#include "riskflow/lifecycle.hpp"
#include "riskflow/store.hpp"

namespace riskflow {

namespace {

struct SeedRow {
    CaseId id;
    const char* locus;
    const char* asset;
    const char* risk_type;
    const char* description;
    const char* consequence;
    const char* vulnerability;
    const char* threat;
    const char* agent;
    const char* impact;  // as typeset in the source table
    const char* likelihood;
    const char* severity;
    const char* decision;
    const char* solution;
};

// Postal-drone case study, transcribed column for column.
constexpr SeedRow kRows[] = {
    {1, "A/G", "All Nodes in the Network", "I", "Degrade Communication Quality", "Network Problem",
     "Lack of QoS", "Packet Loss/Latency/Jitter/Congestion/Delays/Collisions", "Development Team",
     "I", "H", "M", "Mitigate", "Increase the quality of the Development team and use QoS."},
    {2, "G", "Cloud Resources", "I",
     "Becoming The Target of Any Elevation of Privilege on Access Control",
     "Organization/ Operation", "Not Implementing the Right Policy for Access Control",
     "Elevation/ Escalation of Privilege", "Development/ Maintenance Team", "C I A A", "V H", "M",
     "Avoid", "Role-based access control (RBAC) can be implemented."},
    {3, "G", "Client to Terminal network", "E", "Attempting to use weak Authentication mechanisms",
     "Drone Loss/ Information leakage", "Weakness in authentication Security", "Password Cracking",
     "Opponent", "C I A A", "H", "C", "Avoid", "Implementing Kerberos System"},
    {4, "A", "Drone Nodes", "I", "Battery Packs Energy Getting Low or Destroy After a While",
     "Limitation In Flight Duration", "Battery Packs",
     "Battery Failure/ Expired Battery/ Charge Cycle Issues", "maintenance team", "A", "L", "C",
     "Mitigate", "Implementation of the periodic check policy of parts."},
    {5, "G", "Human Resources", "E",
     "Becoming The Target of Social Engineering and Making Backdoors and Import Viruses into "
     "Systems",
     "Organization/ Operation/ HR Damage",
     "Human Resource Challenges/ Employee Egos and dissatisfaction",
     "Not Paying Attention to the salaries and benefits of employees", "Malicious Insiders",
     "C I A", "L", "M", "Mitigate",
     "Making a system for checking Malware infection based on Data science"},
    {6, "G", "Operation", "E/I",
     "New and current Ethical/Legal Regulation Can Take Our Mission Impossible",
     "Operation Problem", "Policy Changing and failure to comply with law", "Law and Justice",
     "Pilot/ Government", "A", "N", "M", "Acceptance", "This risk must be adopted."},
    {7, "A/G", "All Nodes in the Network", "E",
     "Attempting to Eavesdropping on transmitted information", "Information leakage",
     "Weakness in Confidentiality Security", "Man in the Middle or Eavesdropping Attacks",
     "Opponent", "C", "H", "H", "Avoid", "Using a Secure and Fast Cryptographic function."},
};

constexpr const char* kActor = "security risk team";

} // namespace

Register seed_case_study() {
    using namespace std::chrono;
    const Timestamp opened = sys_days{year{2023} / January / 9} + hours{9};
    Timestamp clock = opened;
    auto tick = [&clock] { return clock += minutes{1}; };

    Register reg;
    reg = commit(reg, reg.revision,
                 {kActor, "iteration.open",
                  [&](Register& r) {
                      open_iteration(r, 21, opened);
                      return std::string("opened iteration 1 (cadence 21 days)");
                  }},
                 opened);

    for (const auto& row : kRows) {
        RiskProfile p{row.id,
                      parse_locus(row.locus),
                      row.asset,
                      parse_risk_type(row.risk_type),
                      row.description,
                      row.consequence};
        const Timestamp when = tick();
        reg = commit(reg, reg.revision,
                     {kActor, "case.add",
                      [&](Register& r) {
                          add_case(r, p, "Risk profile drawn up with the business owner.", kActor,
                                   when);
                          return "case " + std::to_string(row.id) + ": profile recorded";
                      }},
                     when);
    }

    for (const auto& row : kRows) {
        RiskAssessment a;
        a.vulnerability = row.vulnerability;
        a.threat = row.threat;
        a.threat_agent = row.agent;
        a.impact = parse_impact(row.impact, ImpactParsing::Lenient);
        a.likelihood = parse_likelihood(row.likelihood);
        a.severity = parse_severity(row.severity);
        const Timestamp when = tick();
        reg = commit(reg, reg.revision,
                     {kActor, "step.assessment",
                      [&](Register& r) {
                          const auto& c = record_step(
                              r, row.id,
                              {0, "Assessed against the rating matrix by the security risk team.",
                               kActor, when, a});
                          return "case " + std::to_string(row.id) + ": assessment recorded, rating " +
                                 std::string(to_code(c.assessment()->rating));
                      }},
                     when);
    }

    for (const auto& row : kRows) {
        const RiskEvaluation e{parse_decision(row.decision), row.solution};
        const Timestamp when = tick();
        reg = commit(reg, reg.revision,
                     {kActor, "step.evaluation",
                      [&](Register& r) {
                          record_step(r, row.id,
                                      {0, "Decision agreed with the business owner.", kActor, when,
                                       e});
                          return "case " + std::to_string(row.id) + ": evaluation recorded, " +
                                 std::string(to_code(e.decision));
                      }},
                     when);
    }
    return reg;
}

} // namespace riskflow
