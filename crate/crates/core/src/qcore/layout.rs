//! Qubit roles and the sender → receiver routing.
//!
//! Qubit 0 is the most significant bit of every computational-basis index.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{spec_err, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Receiver {
    R1,
    R2,
}

impl Receiver {
    pub const BOTH: [Receiver; 2] = [Receiver::R1, Receiver::R2];

    /// 1 or 2.
    pub fn number(self) -> u8 {
        match self {
            Receiver::R1 => 1,
            Receiver::R2 => 2,
        }
    }

    pub fn other(self) -> Receiver {
        match self {
            Receiver::R1 => Receiver::R2,
            Receiver::R2 => Receiver::R1,
        }
    }

    pub fn from_number(n: u8) -> Option<Receiver> {
        match n {
            1 => Some(Receiver::R1),
            2 => Some(Receiver::R2),
            _ => None,
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Sender `S<k>` with 1-based label `k`.
    Sender(usize),
    Receiver(Receiver),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Sender(k) => write!(f, "S{k}"),
            Role::Receiver(r) => write!(f, "{r}"),
        }
    }
}

/// Roles of every qubit in a register plus the routing of senders to the two
/// receivers. The routing fixes the LOCC bipartition
/// (senders of R1, R1) : (senders of R2, R2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    roles: Vec<Role>,
    routing: BTreeMap<usize, Receiver>,
}

impl RegisterLayout {
    pub fn new(roles: Vec<Role>, routing: BTreeMap<usize, Receiver>) -> Result<Self> {
        let text = roles
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        for r in Receiver::BOTH {
            let count = roles.iter().filter(|&&x| x == Role::Receiver(r)).count();
            if count != 1 {
                return spec_err(
                    &text,
                    format!("expected exactly one {r} qubit, found {count}"),
                );
            }
        }
        let mut senders: Vec<usize> = roles
            .iter()
            .filter_map(|r| match r {
                Role::Sender(k) => Some(*k),
                Role::Receiver(_) => None,
            })
            .collect();
        if senders.is_empty() {
            return spec_err(&text, "at least one sender is required");
        }
        senders.sort_unstable();
        if senders.windows(2).any(|w| w[0] == w[1]) {
            return spec_err(&text, "duplicate sender label");
        }
        for k in &senders {
            if !routing.contains_key(k) {
                return spec_err(&text, format!("sender S{k} is not routed to a receiver"));
            }
        }
        if let Some(k) = routing.keys().find(|k| senders.binary_search(k).is_err()) {
            return spec_err(&text, format!("routing names unknown sender S{k}"));
        }
        Ok(RegisterLayout { roles, routing })
    }

    /// `S1 … SN R1 R2` with the first ⌈N/2⌉ senders routed to R1.
    pub fn standard(n_senders: usize) -> Result<Self> {
        let mut roles: Vec<Role> = (1..=n_senders).map(Role::Sender).collect();
        roles.push(Role::Receiver(Receiver::R1));
        roles.push(Role::Receiver(Receiver::R2));
        let routing = (1..=n_senders)
            .map(|k| (k, default_route(k, n_senders)))
            .collect();
        Self::new(roles, routing)
    }

    /// The reference register `S1 S2 R1 R2`.
    pub fn four_qubit() -> Self {
        Self::standard(2).expect("standard layout is valid")
    }

    /// Parses a role string such as `S1 S2 R1 R2` or `S1:R2 S2:R1 R1 R2`.
    /// Senders without an explicit `:R<j>` suffix take the default routing
    /// (first ⌈N/2⌉ sender labels to R1).
    pub fn parse(text: &str) -> Result<Self> {
        let mut roles = Vec::new();
        let mut explicit = BTreeMap::new();
        for tok in text.split_whitespace() {
            let (name, route) = match tok.split_once(':') {
                Some((a, b)) => (a, Some(b)),
                None => (tok, None),
            };
            let role = parse_role(name).ok_or_else(|| Error::Spec {
                input: text.to_string(),
                msg: format!("unknown role `{name}`"),
            })?;
            if let Some(route) = route {
                let Role::Sender(k) = role else {
                    return spec_err(text, format!("only senders take a routing suffix: `{tok}`"));
                };
                match parse_role(route) {
                    Some(Role::Receiver(r)) => {
                        explicit.insert(k, r);
                    }
                    _ => return spec_err(text, format!("bad routing target `{route}`")),
                }
            }
            roles.push(role);
        }
        let n_senders = roles
            .iter()
            .filter(|r| matches!(r, Role::Sender(_)))
            .count();
        let mut routing = BTreeMap::new();
        for r in &roles {
            if let Role::Sender(k) = r {
                let target = explicit
                    .get(k)
                    .copied()
                    .unwrap_or_else(|| default_route(*k, n_senders));
                routing.insert(*k, target);
            }
        }
        Self::new(roles, routing)
    }

    pub fn n_qubits(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn routing(&self) -> &BTreeMap<usize, Receiver> {
        &self.routing
    }

    pub fn n_senders(&self) -> usize {
        self.routing.len()
    }

    /// Indices of every sender qubit, ascending.
    pub fn sender_qubits(&self) -> Vec<usize> {
        self.qubits_where(|r| matches!(r, Role::Sender(_)))
    }

    pub fn receiver_qubit(&self, r: Receiver) -> usize {
        self.roles
            .iter()
            .position(|&x| x == Role::Receiver(r))
            .expect("layout holds both receivers")
    }

    /// Indices of the receiver qubits (R1, R2 in ascending index order).
    pub fn receiver_qubits(&self) -> Vec<usize> {
        self.qubits_where(|r| matches!(r, Role::Receiver(_)))
    }

    /// Sender qubits routed to `r`, ascending.
    pub fn sender_group(&self, r: Receiver) -> Vec<usize> {
        self.qubits_where(|role| matches!(role, Role::Sender(k) if self.routing[k] == r))
    }

    /// All qubits on side `r` of the LOCC bipartition: its senders and itself.
    pub fn side_qubits(&self, r: Receiver) -> Vec<usize> {
        self.qubits_where(|role| match role {
            Role::Sender(k) => self.routing[k] == r,
            Role::Receiver(x) => *x == r,
        })
    }

    pub fn position_of(&self, role: Role) -> Option<usize> {
        self.roles.iter().position(|&r| r == role)
    }

    fn qubits_where(&self, pred: impl Fn(&Role) -> bool) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| pred(r))
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for RegisterLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_senders();
        let parts: Vec<String> = self
            .roles
            .iter()
            .map(|role| match role {
                Role::Sender(k) if self.routing[k] != default_route(*k, n) => {
                    format!("{role}:{}", self.routing[k])
                }
                _ => role.to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn default_route(label: usize, n_senders: usize) -> Receiver {
    if label <= n_senders.div_ceil(2) {
        Receiver::R1
    } else {
        Receiver::R2
    }
}

fn parse_role(tok: &str) -> Option<Role> {
    let (head, num) = tok.split_at(1.min(tok.len()));
    let k: usize = num.parse().ok()?;
    match head {
        "S" | "s" if k >= 1 => Some(Role::Sender(k)),
        "R" | "r" => Receiver::from_number(u8::try_from(k).ok()?).map(Role::Receiver),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_qubit_sides() {
        let l = RegisterLayout::four_qubit();
        assert_eq!(l.side_qubits(Receiver::R1), vec![0, 2]);
        assert_eq!(l.side_qubits(Receiver::R2), vec![1, 3]);
        assert_eq!(l.sender_qubits(), vec![0, 1]);
        assert_eq!(l.to_string(), "S1 S2 R1 R2");
    }

    #[test]
    fn explicit_routing_round_trips() {
        let l = RegisterLayout::parse("S1:R2 S2:R1 S3 R1 R2").unwrap();
        assert_eq!(l.sender_group(Receiver::R1), vec![1]);
        assert_eq!(l.sender_group(Receiver::R2), vec![0, 2]);
        assert_eq!(RegisterLayout::parse(&l.to_string()).unwrap(), l);
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(RegisterLayout::parse("S1 S2 R1").is_err());
        assert!(RegisterLayout::parse("S1 S1 R1 R2").is_err());
        assert!(RegisterLayout::parse("S1 R1 R2 R2").is_err());
        assert!(RegisterLayout::parse("R1 R2").is_err());
        assert!(RegisterLayout::parse("S1 X R1 R2").is_err());
        assert!(RegisterLayout::parse("S1 R1:R2 R2").is_err());
    }
}
