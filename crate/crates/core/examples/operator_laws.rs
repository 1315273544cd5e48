//! The built-in operator pairs, their law checks and the special-law test
//! with a counterexample for each pair that fails it.

use lazygrid::algebra::laws::{check_laws, check_special};
use lazygrid::algebra::{PairVisitor, SampledPair};
use lazygrid::PairId;

struct Report;

impl PairVisitor for Report {
    type Output = ();

    fn visit<P: SampledPair>(self, pair: P) {
        let laws = match check_laws(&pair, 500, 11) {
            Ok(()) => "all laws hold".to_string(),
            Err(e) => e.to_string(),
        };
        let special = check_special(&pair, 500, 11);
        let witness = special
            .witness
            .map_or_else(String::new, |w| format!(" ({w})"));
        println!(
            "{:<11} inverse={:<5} special={:<5}{witness}; {laws}",
            pair.name(),
            pair.has_inverse(),
            special.holds
        );
    }
}

fn main() {
    for id in PairId::ALL {
        id.visit(Report);
    }
}
