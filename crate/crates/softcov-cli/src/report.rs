//! Flat JSON rendering of an exponent report, with 17-significant-digit
//! floats (hand-rolled so the emitted bytes are stable).

use softcov::channel::DiscreteChannel;
use softcov::exponents::{alpha_mutual_information, gallager_tv_one_shot, ExponentReport};
use softcov::simulator::fixed_codebook_size;

use crate::fmt::f17;

pub fn exponent_report_json(ch: &DiscreteChannel, report: &ExponentReport) -> String {
    let m_at_rate = fixed_codebook_size(1, report.rate);
    let one_shot = gallager_tv_one_shot(ch, m_at_rate);
    let alpha_tv = 1.0 / (1.0 - report.rho_star);
    let mut s = String::from("{\n");
    let mut field = |key: &str, value: String, last: bool| {
        s.push_str(&format!(
            "  \"{key}\": {value}{}\n",
            if last { "" } else { "," }
        ));
    };
    field("rate", f17(report.rate), false);
    field("mutual_information", f17(report.mutual_information), false);
    field("tau_star", f17(report.tau_star), false);
    field("kl_exponent", f17(report.kl_exponent), false);
    field("tau_at_boundary", report.tau_at_boundary.to_string(), false);
    field("rho_star", f17(report.rho_star), false);
    field("tv_exponent", f17(report.tv_exponent), false);
    field("rho_at_boundary", report.rho_at_boundary.to_string(), false);
    field("beta_star", f17(report.beta_star), false);
    field("singular", report.singular.to_string(), false);
    field("one_shot_tv_bound_at_rate_size", f17(one_shot), false);
    field("one_shot_codebook_size", m_at_rate.to_string(), false);
    field("i_alpha_1", f17(report.mutual_information), false);
    field("i_alpha_2", f17(alpha_mutual_information(ch, 2.0)), false);
    field(
        "i_alpha_tv_order",
        f17(alpha_mutual_information(ch, alpha_tv)),
        true,
    );
    s.push('}');
    s
}
