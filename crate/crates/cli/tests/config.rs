use std::path::PathBuf;

use unorm_cli::config::{Config, Overrides};

fn write_config(tag: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("unorm-{tag}-{}.toml", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn flags_win_over_the_file() {
    let path = write_config("precedence", "precision = 30\nseed = 9\nnmax = 3\n");
    let from_file = Overrides::from_file(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let flags = Overrides { precision: Some(24), ..Default::default() };
    let c = Config::resolve(Some(&from_file), &flags).unwrap();
    assert_eq!(c.precision, 24);
    assert_eq!(c.seed, 9);
    assert_eq!(c.n_max, 3);
    assert_eq!(c.guard, Config::default().guard);
}

#[test]
fn unknown_keys_are_rejected() {
    let path = write_config("typo", "precison = 30\n");
    assert!(Overrides::from_file(&path).is_err());
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn validation() {
    let bad = [
        Overrides { p: Some(9), ..Default::default() },
        Overrides { p: Some(2), ..Default::default() },
        Overrides { precision: Some(4), guard: Some(4), ..Default::default() },
        Overrides { trunc: Some(10), ..Default::default() },
        Overrides { nmax: Some(0), ..Default::default() },
    ];
    for o in bad {
        assert!(Config::resolve(None, &o).is_err(), "{o:?}");
    }
    let c = Config::resolve(None, &Overrides { p: Some(7), ..Default::default() }).unwrap();
    assert_eq!(c.trunc_for(c.p), 343);
}
