use std::fmt;

use super::Formula;

// Only core connectives are printed. `->` is right-associative and binds
// loosest, so only an implication in antecedent position, or under `~`,
// needs parentheses.
pub(super) fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Bottom => out.write_str("0"),
        Formula::Var(i) => write!(out, "X{i}"),
        Formula::Not(a) => {
            out.write_str("~")?;
            write_operand(a, out)
        }
        Formula::Implies(a, b) => {
            write_operand(a, out)?;
            out.write_str(" -> ")?;
            write_formula(b, out)
        }
    }
}

fn write_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Formula::Implies(..) = f {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}
