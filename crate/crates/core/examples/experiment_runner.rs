//! Driving the experiment runner in-process: a config file plus flags,
//! with the table captured in memory.

use std::fs;

fn main() {
    let config = std::env::temp_dir().join("gext-example.conf");
    fs::write(&config, "# renormalize a random 4-interval exchange\nlengths = random\nn = 4\ngroup = su2\nsteps = 10\n").expect("write config");

    let args = ["gext", "renorm", "--config", config.to_str().expect("utf-8 path"), "--seed", "3", "--format", "jsonl"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = gext::cli::run(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
    let _ = fs::remove_file(&config);
}
