//! JSON-lines report cache: one report per line, keyed by
//! (group, check name, code version), so repeated runs skip finished groups.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::group::Group;
use crate::report::SearchReport;
use crate::Result;

#[derive(Clone, Debug)]
pub struct ReportCache {
    path: PathBuf,
}

impl ReportCache {
    pub fn new(path: impl AsRef<Path>) -> ReportCache {
        ReportCache {
            path: path.as_ref().to_path_buf(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All parseable reports in file order. Malformed lines are skipped with
    /// a warning rather than poisoning the whole cache.
    pub fn load_all(&self) -> Result<Vec<SearchReport>> {
        if !self.path.exists() {
            return Ok(Vec::new());
        }
        let reader = BufReader::new(File::open(&self.path)?);
        let mut out = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<SearchReport>(&line) {
                Ok(report) => out.push(report),
                Err(e) => eprintln!(
                    "warning: {}:{}: skipping malformed cache line: {e}",
                    self.path.display(),
                    lineno + 1
                ),
            }
        }
        Ok(out)
    }

    /// Most recent cached report for the key, if any.
    pub fn lookup(
        &self,
        group: &Group,
        check: &str,
        code_version: &str,
    ) -> Result<Option<SearchReport>> {
        let key = [group.n1(), group.n2()];
        Ok(self
            .load_all()?
            .into_iter()
            .rev()
            .find(|r| r.group == key && r.check == check && r.code_version == code_version))
    }

    pub fn append(&self, report: &SearchReport) -> Result<()> {
        if let Some(parent) = self.path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{}", report.to_json_line())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Verdict, CODE_VERSION};

    #[test]
    fn append_then_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ReportCache::new(dir.path().join("reports.jsonl"));
        let g = Group::new(2, 4).unwrap();

        assert!(cache
            .lookup(&g, "davenport", CODE_VERSION)
            .unwrap()
            .is_none());

        let mut r = SearchReport::new("davenport", &g, Verdict::Verified);
        r.computed = Some(5.into());
        cache.append(&r).unwrap();

        let mut newer = r.clone();
        newer.stats.wall_ms = 3;
        cache.append(&newer).unwrap();

        let hit = cache
            .lookup(&g, "davenport", CODE_VERSION)
            .unwrap()
            .unwrap();
        assert_eq!(hit, newer, "lookup returns the most recent entry");

        assert!(cache
            .lookup(&g, "davenport", "not-this-version")
            .unwrap()
            .is_none());
        let other = Group::new(3, 3).unwrap();
        assert!(cache
            .lookup(&other, "davenport", CODE_VERSION)
            .unwrap()
            .is_none());
        assert_eq!(cache.load_all().unwrap().len(), 2);
    }

    #[test]
    fn malformed_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reports.jsonl");
        std::fs::write(&path, "not json\n\n").unwrap();
        let cache = ReportCache::new(&path);
        let g = Group::new(2, 4).unwrap();
        cache
            .append(&SearchReport::new("disc", &g, Verdict::Verified))
            .unwrap();
        assert_eq!(cache.load_all().unwrap().len(), 1);
    }
}
