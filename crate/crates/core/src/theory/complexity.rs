use crate::error::{invalid, Result};

/// One count per architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArchitectureCounts {
    pub conventional: u64,
    pub proposed: u64,
    pub group: u64,
    pub full: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityCounts {
    /// Configurable impedances in the reflecting network.
    pub impedances: ArchitectureCounts,
    /// Values sent over the BS–RIS control link per reconfiguration.
    pub control_load: ArchitectureCounts,
}

/// Hardware and signalling counts for `n` elements and group size `group`.
pub fn complexity_counts(n: u64, group: u64) -> Result<ComplexityCounts> {
    if n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    if group == 0 || !n.is_multiple_of(group) {
        return Err(invalid("group_size", format!("{group} does not divide N = {n}")));
    }
    let grp = n * (group + 1) / 2;
    let full = n * (n + 1) / 2;
    Ok(ComplexityCounts {
        impedances: ArchitectureCounts {
            conventional: n,
            proposed: n,
            group: grp,
            full,
        },
        control_load: ArchitectureCounts {
            conventional: n,
            proposed: 2 * n,
            group: grp,
            full,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries() {
        let c = complexity_counts(16, 4).unwrap();
        assert_eq!(c.control_load.proposed, 32);
        assert_eq!(c.control_load.full, 136);
        assert_eq!(complexity_counts(16, 1).unwrap().impedances.group, 16);
        let c = complexity_counts(64, 4).unwrap();
        assert_eq!((c.control_load.group, c.control_load.proposed), (160, 128));
        assert!(complexity_counts(10, 4).is_err());
    }
}
