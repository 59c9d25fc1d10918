use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_modal-lca"));
    c.env_remove("MODAL_LCA_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn copy_data(to: &Path) {
    let ds = modal_lca::Dataset::load_bundled().unwrap();
    ds.write_to(to).unwrap();
}

#[test]
fn validate_passes_on_bundled_data() {
    let o = run(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().last().unwrap().ends_with(" 0 failed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn assess_writes_csv() {
    let o = run(&["assess", "shared_bike", "private_motorcycle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("mode,scenario,indicator,component,value,unit\n"));
    assert_eq!(text.lines().filter(|l| l.contains(",total,")).count(), 10);
    assert_eq!(text, stdout(&run(&["assess", "shared_bike", "private_motorcycle"])));
}

#[test]
fn sweep_writes_svg_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lifespan.svg");
    let o = run(&["sweep", "lifespan", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn breakeven_and_compare() {
    let o = run(&["breakeven", "shared_bike", "--target", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let km: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
    assert!((km / 1500.0 - 1.0).abs() <= 0.1, "{line}");
    let o = run(&["breakeven", "shared_bike", "--target", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unattainable"));
    let o = run(&["compare"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn servicing_sweep_of_a_private_mode_is_rejected() {
    let o = run(&["sweep", "servicing", "--mode", "private_bike"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("private"));
}

#[test]
fn unknown_inputs_are_data_errors() {
    assert_eq!(run(&["assess", "hovercraft"]).status.code(), Some(2));
    assert_eq!(run(&["assess", "--indicator", "Ozone"]).status.code(), Some(2));
    assert_eq!(run(&["assess", "--mix", "XX"]).status.code(), Some(2));
}

#[test]
fn missing_data_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--data", dir.path().join("absent").to_str().unwrap(), "assess"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn malformed_data_copy_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let file = dir.path().join("processes.csv");
    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let row = lines.iter().position(|l| l.ends_with(",exchange")).unwrap();
    let mut fields: Vec<&str> = lines[row].split(',').collect();
    fields[3] = "not-a-number";
    lines[row] = fields.join(",");
    std::fs::write(&file, lines.join("\n")).unwrap();
    let o = run(&["--data", dir.path().to_str().unwrap(), "assess"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(&format!("processes.csv:{}", row + 1)));
}

#[test]
fn failed_golden_check_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let file = dir.path().join("parameters.toml");
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("base_kwh = 3651"));
    std::fs::write(&file, text.replace("base_kwh = 3651", "base_kwh = 3000")).unwrap();
    let o = run(&["--data", dir.path().to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn data_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let from_env = bin()
        .env("MODAL_LCA_DATA", dir.path())
        .args(["normalize"])
        .output()
        .unwrap();
    assert_eq!(from_env.status.code(), Some(0));
    assert_eq!(stdout(&from_env), stdout(&run(&["normalize"])));
    let absent = bin()
        .env("MODAL_LCA_DATA", dir.path().join("absent"))
        .args(["normalize"])
        .output()
        .unwrap();
    assert_eq!(absent.status.code(), Some(3));
}
