use qsu2::checks::{run_check, CheckConfig, CATALOG};

fn main() {
    let cfg = CheckConfig::default();
    for id in CATALOG {
        let t = std::time::Instant::now();
        match run_check(&cfg, id, false) {
            Ok(r) => println!(
                "{:26} pass={} absErr={:.3e} relErr={:.3e} [{:.2}s] {}",
                r.id,
                r.pass,
                r.max_abs_err,
                r.max_rel_err,
                t.elapsed().as_secs_f64(),
                &r.notes.chars().take(220).collect::<String>()
            ),
            Err(e) => println!("{id:26} ERROR {e}"),
        }
    }
}
