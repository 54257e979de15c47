//! Trajectory CSV export.

use std::io::Write;
use std::path::Path;

pub const TRAJECTORY_HEADER: &str = "step,robot_id,x,y,theta,v,w,reward,event";

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub step: u64,
    pub robot_id: usize,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    pub w: f64,
    pub reward: f64,
    /// Empty, "goal", "collision" or "stuck".
    pub event: &'static str,
}

impl TrajectoryRow {
    fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            self.step, self.robot_id, self.x, self.y, self.theta, self.v, self.w, self.reward,
            self.event
        )
    }
}

pub fn write_trajectory_csv(path: &Path, rows: &[TrajectoryRow]) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for row in rows {
        row.write_to(&mut out)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let rows = vec![TrajectoryRow {
            step: 0,
            robot_id: 0,
            x: 1.5,
            y: -0.25,
            theta: 0.0,
            v: 0.5,
            w: 0.0,
            reward: 0.125,
            event: "goal",
        }];
        write_trajectory_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TRAJECTORY_HEADER);
        assert_eq!(lines.next().unwrap(), "0,0,1.5,-0.25,0,0.5,0,0.125,goal");
        assert!(lines.next().is_none());
    }
}
