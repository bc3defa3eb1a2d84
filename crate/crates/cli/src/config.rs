//! Flat `key = value` configuration files.
//!
//! Each entry becomes `--key value` and is spliced in front of the
//! command-line flags, so flags given on the command line win.

use std::ffi::OsString;

/// Translates config text into flag arguments.
pub fn config_args(text: &str) -> Result<Vec<OsString>, String> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key", lineno + 1));
        }
        let value = value.trim();
        match value {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                args.push(format!("--{key}").into());
                args.extend(value.split_whitespace().map(OsString::from));
            }
        }
    }
    Ok(args)
}

/// Removes `--config FILE` / `--config=FILE` from `argv`, returning the path.
pub fn take_config_flag(argv: &mut Vec<OsString>) -> Result<Option<OsString>, String> {
    let mut found = None;
    let mut i = 0;
    while i < argv.len() {
        let arg = argv[i].to_string_lossy().into_owned();
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            if i + 1 >= argv.len() {
                return Err("--config needs a file path".into());
            }
            found = Some(argv.remove(i + 1));
            argv.remove(i);
            continue;
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            found = Some(OsString::from(path));
            argv.remove(i);
            continue;
        }
        i += 1;
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let args = config_args("# window\nwindow = -2,2,-2,2\nres = 8 8\njson = true\nverbose = false\n").unwrap();
        let args: Vec<String> = args.into_iter().map(|a| a.into_string().unwrap()).collect();
        assert_eq!(args, ["--window", "-2,2,-2,2", "--res", "8", "8", "--json"]);
        assert!(config_args("nonsense").is_err());
    }

    #[test]
    fn removes_config_flag() {
        let mut argv: Vec<OsString> =
            ["sflab", "render", "--config", "a.cfg", "--json"].iter().map(OsString::from).collect();
        assert_eq!(take_config_flag(&mut argv).unwrap(), Some(OsString::from("a.cfg")));
        assert_eq!(argv, ["sflab", "render", "--json"]);
    }
}
