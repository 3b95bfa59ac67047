//! Words over the involutive alphabet `{a, b, c}` and their evaluation
//! through a wreath recursion.
//!
//! Every generator is an involution, so a word's inverse is its reversal and
//! no formal inverse letters exist. Conventions: `x^y = y^-1 x y` and
//! `[x, y] = x^-1 y^-1 x y`, which for letters read `yxy` and `xyxy`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automorphism::Portrait;
use crate::error::{Error, Result};
use crate::f2::F2Vector;
use crate::perm::Perm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A = 0,
    B = 1,
    C = 2,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            _ => None,
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// A plain string over `abc`; see [`FromStr`] for the expression syntax.
    pub fn plain(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("letter {c:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word::from_letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    /// Group inverse: reversal, since every letter is an involution.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Word {
        Word {
            letters: self.letters.repeat(k),
        }
    }

    /// Cancels adjacent equal letters until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().concat(&y.inverse()).concat(x).concat(y)
    }

    /// `x^y = y^-1 x y`.
    pub fn conjugate(x: &Word, y: &Word) -> Word {
        y.inverse().concat(x).concat(y)
    }

    /// The endomorphism `a -> a, b -> b^c = cbc, c -> c^b = bcb`.
    pub fn tau(&self) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * 3);
        for &l in &self.letters {
            match l {
                Letter::A => letters.push(Letter::A),
                Letter::B => letters.extend([Letter::C, Letter::B, Letter::C]),
                Letter::C => letters.extend([Letter::B, Letter::C, Letter::B]),
            }
        }
        Word { letters }
    }

    pub fn tau_pow(&self, n: usize) -> Word {
        (0..n).fold(self.clone(), |w, _| w.tau())
    }

    /// Letter counts mod 2, as a vector in GF(2)^3 ordered `(a, b, c)`.
    /// Zero exactly when the word lies in the commutator subgroup.
    pub fn parity_vector(&self) -> F2Vector {
        let mut v = F2Vector::zero(3);
        for &l in &self.letters {
            v.flip(l.index());
        }
        v
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "Word(ε)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::plain(&s).map_err(serde::de::Error::custom)
    }
}

/// The four relator families of the Hanoi towers group, in commutator
/// notation. The presentation is `<a, b, c | a^2, b^2, c^2, tau^n(w_i), n >= 0>`.
pub const RELATORS: [&str; 4] = [
    "[b,a][b,c][c,a][a,c]^b[a,b]^c[c,b]",
    "[b,c]^a[c,b][b,a][c,a][a,b][a,c]^b",
    "[c,b][a,b][b,c]^a[c,b]^2[b,a][b,c]^a[b,c]^a",
    "[b,c]^a[a,b]^c[b,a]^2[a,c][a,b]^c[c,a][c,b]",
];

/// Relator `w_i` (1-based) expanded to a plain word.
pub fn relator(i: usize) -> Result<Word> {
    RELATORS
        .get(i.wrapping_sub(1))
        .ok_or_else(|| Error::Parse(format!("no relator w{i}")))?
        .parse()
}

/// Parses word expressions:
///
/// * letters `a`, `b`, `c`; `1` or `e` for the empty word;
/// * brackets `[x,y]` (commutator) and parentheses `(x)`;
/// * postfix `^y` (conjugation by a letter or parenthesised word),
///   `^k` (power) and `^-1` (inverse);
/// * `w1`..`w4` for the relators and `tau^n(x)` for iterates of tau.
///
/// Whitespace and `*` between factors are ignored; `[x.y]` is read as `[x,y]`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let w = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_whitespace() || c == b'*' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {:?}", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("expected a number"))
    }

    fn expr(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        while let Some(c) = self.peek() {
            if matches!(c, b']' | b')' | b',' | b'.') {
                break;
            }
            w = w.concat(&self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let mut w = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    if self.number()? != 1 {
                        return Err(self.error("only ^-1 is supported"));
                    }
                    w = w.inverse();
                }
                Some(c) if c.is_ascii_digit() => w = w.pow(self.number()?),
                Some(_) => {
                    let by = self.atom()?;
                    w = Word::conjugate(&w, &by);
                }
                None => return Err(self.error("dangling ^")),
            }
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                let sep = self.peek();
                if sep == Some(b',') || sep == Some(b'.') {
                    self.pos += 1;
                } else {
                    return Err(self.error("expected ','"));
                }
                let y = self.expr()?;
                self.expect(b']')?;
                Ok(Word::commutator(&x, &y))
            }
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b')')?;
                Ok(x)
            }
            Some(b'1') | Some(b'e') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(b'w') => {
                self.pos += 1;
                let i = self.number()?;
                relator(i)
            }
            Some(b't') => {
                if !self.src[self.pos..].starts_with(b"tau") {
                    return Err(self.error("unknown identifier"));
                }
                self.pos += 3;
                let n = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.number()?
                } else {
                    1
                };
                self.expect(b'(')?;
                let x = self.expr()?;
                self.expect(b')')?;
                Ok(x.tau_pow(n))
            }
            Some(c) => match Letter::from_char(c as char) {
                Some(l) => {
                    self.pos += 1;
                    Ok(Word::letter(l))
                }
                None => Err(self.error("unexpected character")),
            },
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Generator definitions `x = (x_1, .., x_d) root` for the letters `a, b, c`.
pub struct WreathRecursion {
    arity: usize,
    rules: Vec<(Vec<Word>, Perm)>,
    // generator portraits per depth; not observable
    cache: Mutex<HashMap<usize, Arc<Vec<Portrait>>>>,
}

impl Clone for WreathRecursion {
    fn clone(&self) -> Self {
        WreathRecursion {
            arity: self.arity,
            rules: self.rules.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for WreathRecursion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WreathRecursion")
            .field("arity", &self.arity)
            .field("rules", &self.rules)
            .finish()
    }
}

impl WreathRecursion {
    /// `rules[i]` defines letter `i` (`a`, `b`, `c` in order).
    pub fn new(arity: usize, rules: Vec<(Vec<Word>, Perm)>) -> Result<Self> {
        if rules.len() != Letter::ALL.len() {
            return Err(Error::Shape(format!("{} rules for 3 letters", rules.len())));
        }
        for (states, root) in &rules {
            if states.len() != arity || root.degree() != arity {
                return Err(Error::Shape(format!(
                    "rule with {} states and root of degree {} for arity {arity}",
                    states.len(),
                    root.degree()
                )));
            }
        }
        Ok(WreathRecursion {
            arity,
            rules,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// `a = (a, 1, 1)(2 3)`, `b = (1, b, 1)(1 3)`, `c = (1, 1, c)(1 2)`.
    pub fn hanoi() -> Self {
        let e = Word::empty;
        let l = Word::letter;
        let cyc = |c: &[usize]| Perm::from_cycles(3, &[c]).expect("valid transposition");
        WreathRecursion::new(
            3,
            vec![
                (vec![l(Letter::A), e(), e()], cyc(&[2, 3])),
                (vec![e(), l(Letter::B), e()], cyc(&[1, 3])),
                (vec![e(), e(), l(Letter::C)], cyc(&[1, 2])),
            ],
        )
        .expect("well-formed recursion")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rule(&self, l: Letter) -> &(Vec<Word>, Perm) {
        &self.rules[l.index()]
    }

    fn generators_at(&self, depth: usize) -> Arc<Vec<Portrait>> {
        if let Some(g) = self.cache.lock().expect("cache lock").get(&depth) {
            return g.clone();
        }
        let table = if depth == 0 {
            vec![Portrait::identity(self.arity, 0); 3]
        } else {
            let below = self.generators_at(depth - 1);
            self.rules
                .iter()
                .map(|(states, root)| {
                    let subs: Vec<Portrait> = states
                        .iter()
                        .map(|w| evaluate_with(&below, self.arity, w, depth - 1))
                        .collect();
                    Portrait::from_states(root, &subs).expect("states share a shape")
                })
                .collect()
        };
        let table = Arc::new(table);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(depth, table.clone());
        table
    }

    /// The depth-`depth` portrait of the element spelled by `w`.
    pub fn evaluate(&self, w: &Word, depth: usize) -> Portrait {
        let gens = self.generators_at(depth);
        evaluate_with(&gens, self.arity, w, depth)
    }

    /// Permutations of the `d^n` level-`n` vertices induced by `a, b, c`.
    pub fn generator_leaf_perms(&self, n: usize) -> Vec<Perm> {
        self.generators_at(n)
            .iter()
            .map(|g| g.leaf_permutation(n).expect("level within depth"))
            .collect()
    }

    /// Syntactic first-level decomposition `w = (w_1, .., w_d) root`, with the
    /// state words freely reduced.
    pub fn word_states(&self, w: &Word) -> (Vec<Word>, Perm) {
        let d = self.arity;
        let mut states = vec![Word::empty(); d];
        // position[i]: where first-level vertex i has been moved so far
        let mut position: Vec<usize> = (0..d).collect();
        let mut root = Perm::identity(d);
        for &l in w.letters() {
            let (sub, sigma) = &self.rules[l.index()];
            for i in 0..d {
                states[i] = states[i].concat(&sub[position[i]]);
                position[i] = sigma.image(position[i]);
            }
            root = root.then(sigma);
        }
        (states.iter().map(Word::free_reduce).collect(), root)
    }

    /// Whether `w` evaluates to the identity at `depth`.
    pub fn check_relator(&self, w: &Word, depth: usize) -> bool {
        self.evaluate(w, depth).is_identity()
    }

    /// Reidemeister-Schreier generators of the first level stabilizer: the
    /// kernel of the root-permutation map, with a breadth-first transversal.
    pub fn stab1_schreier_generators(&self) -> Vec<Word> {
        let images: Vec<Perm> = self.rules.iter().map(|(_, root)| root.clone()).collect();
        kernel_schreier_generators(&images)
    }
}

fn evaluate_with(gens: &[Portrait], arity: usize, w: &Word, depth: usize) -> Portrait {
    let mut acc = Portrait::identity(arity, depth);
    for &l in w.letters() {
        acc = acc
            .compose(&gens[l.index()])
            .expect("generators share the depth");
    }
    acc
}

/// Schreier generators of the kernel of the homomorphism sending letter `i` to
/// `images[i]`. Cosets are the elements of the image group, discovered breadth
/// first over `a, b, c`; each generator `t x (t')^-1` is freely reduced and
/// trivial results are dropped.
pub fn kernel_schreier_generators(images: &[Perm]) -> Vec<Word> {
    assert_eq!(images.len(), Letter::ALL.len(), "one image per letter");
    let degree = images[0].degree();
    let mut index: HashMap<Perm, usize> = HashMap::new();
    let mut reps: Vec<(Perm, Word)> = Vec::new();
    let id = Perm::identity(degree);
    index.insert(id.clone(), 0);
    reps.push((id, Word::empty()));
    let mut head = 0;
    while head < reps.len() {
        let (p, w) = reps[head].clone();
        for l in Letter::ALL {
            let q = p.then(&images[l.index()]);
            if !index.contains_key(&q) {
                index.insert(q.clone(), reps.len());
                let mut wq = w.clone();
                wq.push(l);
                reps.push((q, wq));
            }
        }
        head += 1;
    }

    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (p, t) in &reps {
        for l in Letter::ALL {
            let q = p.then(&images[l.index()]);
            let t2 = &reps[index[&q]].1;
            let mut w = t.clone();
            w.push(l);
            let g = w.concat(&t2.inverse()).free_reduce();
            if !g.is_empty() && seen.insert(g.clone()) {
                out.push(g);
            }
        }
    }
    out
}
