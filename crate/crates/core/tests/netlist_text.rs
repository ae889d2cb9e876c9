use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use probtele::netlist::{expand_u2_full, parse_netlist, print_netlist, un_netlist};
use probtele::protocol::prepare_channel_circuit;
use probtele::Channel64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_netlists_parse_back_exactly(seed in any::<u64>(), n in 1usize..=4) {
        let ch = Channel64::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut circuits = vec![un_netlist(&ch).unwrap(), prepare_channel_circuit(&ch).unwrap()];
        if n == 2 {
            circuits.push(expand_u2_full(&ch).unwrap());
        }
        for nl in circuits {
            let back = parse_netlist::<f64>(&print_netlist(&nl)).unwrap();
            prop_assert_eq!(&back, &nl);
            prop_assert_eq!(back.matrix(), nl.matrix());
        }
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_netlist::<f64>("QUBITS q1 q2\nCNOT q1 q1\n").unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
    assert!(parse_netlist::<f64>("QUBITS q1\nFROB q1\n").is_err());
    assert!(parse_netlist::<f64>("X q1\n").is_err());
}
