use std::sync::Arc;

use num_rational::Rational64;

use crate::error::{Error, Result};

use super::classfn::{external_tensor, ClassFunction, ClassInfo};
use super::cyclotomic::Cyclotomic;

/// The irreducible characters of a finite group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    info: Arc<ClassInfo>,
    characters: Vec<ClassFunction>,
    degrees: Vec<u64>,
}

impl CharacterTable {
    /// Wraps a list of characters after checking the orthogonality relations.
    pub fn new(info: Arc<ClassInfo>, characters: Vec<ClassFunction>) -> Result<CharacterTable> {
        let mut degrees = Vec::with_capacity(characters.len());
        for chi in &characters {
            if **chi.info() != *info {
                return Err(Error::GroupMismatch(info.name.clone(), chi.info().name.clone()));
            }
            let d = chi.degree().to_integer().filter(|&d| d > 0);
            degrees.push(d.ok_or_else(|| Error::Defect(format!("degree {} is not a positive integer", chi.degree())))? as u64);
        }
        let t = CharacterTable { info, characters, degrees };
        t.verify()?;
        Ok(t)
    }

    pub fn info(&self) -> &Arc<ClassInfo> {
        &self.info
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn characters(&self) -> &[ClassFunction] {
        &self.characters
    }

    pub fn character(&self, i: usize) -> &ClassFunction {
        &self.characters[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn trivial_index(&self) -> usize {
        let one = ClassFunction::trivial(self.info.clone());
        self.position(&one).expect("trivial character present")
    }

    pub fn position(&self, chi: &ClassFunction) -> Option<usize> {
        self.characters.iter().position(|c| c == chi)
    }

    /// Multiplicity of each irreducible in a virtual character.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<Vec<i64>> {
        self.characters.iter().map(|irr| chi.integer_inner_product(irr)).collect()
    }

    /// Checks both orthogonality relations, the class count and the sum of
    /// squared degrees.
    pub fn verify(&self) -> Result<()> {
        let k = self.info.num_classes();
        if self.characters.len() != k {
            return Err(Error::Defect(format!("{} characters for {k} classes", self.characters.len())));
        }
        let sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sq != self.info.order {
            return Err(Error::Defect(format!("sum of squared degrees {sq} != {}", self.info.order)));
        }
        let conj: Vec<Vec<Cyclotomic>> =
            self.characters.iter().map(|c| c.values().iter().map(|v| v.conj()).collect()).collect();
        let order = self.info.order as i64;
        for i in 0..k {
            for j in i..k {
                let prods: Vec<Cyclotomic> =
                    (0..k).map(|c| self.characters[i].value(c).mul_ref(&conj[j][c])).collect();
                let ip = Cyclotomic::linear_combination(
                    self.info.sizes.iter().zip(&prods).map(|(&s, p)| (Rational64::new(s as i64, order), p)),
                );
                if ip != Cyclotomic::from_int((i == j) as i64) {
                    return Err(Error::Defect(format!("<chi_{i}, chi_{j}> = {ip}")));
                }
            }
        }
        for c in 0..k {
            for d in c..k {
                let prods: Vec<Cyclotomic> =
                    (0..k).map(|i| self.characters[i].value(c).mul_ref(&conj[i][d])).collect();
                let s = Cyclotomic::linear_combination(prods.iter().map(|p| (Rational64::from_integer(1), p)));
                let expect = if c == d { (self.info.order / self.info.sizes[c]) as i64 } else { 0 };
                if s != Cyclotomic::from_int(expect) {
                    return Err(Error::Defect(format!("column sum for classes {c}, {d} is {s}")));
                }
            }
        }
        Ok(())
    }

    /// Table of a direct product as all external tensors, indexed in mixed
    /// radix over the factor tables.
    pub fn product(factors: &[&CharacterTable]) -> CharacterTable {
        let info = ClassInfo::product(&factors.iter().map(|t| t.info.clone()).collect::<Vec<_>>());
        let mut chars: Vec<Vec<&ClassFunction>> = vec![Vec::new()];
        for t in factors {
            chars = chars
                .into_iter()
                .flat_map(|prefix| {
                    t.characters.iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        let characters: Vec<ClassFunction> = chars.iter().map(|fs| external_tensor(fs)).collect();
        let degrees = chars.iter().map(|fs| fs.iter().map(|f| f.degree().to_integer().unwrap() as u64).product()).collect();
        CharacterTable { info, characters, degrees }
    }

    /// CSV with header `char_index,degree,c0,...` and one row per character.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["char_index".to_string(), "degree".to_string()];
        header.extend((0..self.info.num_classes()).map(|c| format!("c{c}")));
        w.write_record(&header).expect("in-memory write");
        for (i, chi) in self.characters.iter().enumerate() {
            let mut row = vec![i.to_string(), self.degrees[i].to_string()];
            row.extend(chi.values().iter().map(|v| v.to_string()));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    /// Parses a dump produced by [`CharacterTable::to_csv`] and re-verifies it.
    pub fn from_csv(info: Arc<ClassInfo>, text: &str) -> Result<CharacterTable> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let k = info.num_classes();
        let mut chars = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != k + 2 {
                return Err(Error::Parse(format!("row has {} fields, expected {}", rec.len(), k + 2)));
            }
            let values: Result<Vec<Cyclotomic>> = rec.iter().skip(2).map(|s| s.parse()).collect();
            chars.push(ClassFunction::new(info.clone(), values?)?);
        }
        CharacterTable::new(info, chars)
    }
}
