//! Command implementations behind the `aklt` binary.

pub mod args;
pub mod parse;

use std::fs;
use std::io::Write;
use std::path::Path;

use aklt_core::chain::{BlockSpec, ChainFile};
use aklt_core::density::{reduced_density_matrix, spectrum_by_peeling, verify_projector_structure};
use aklt_core::hamiltonian::{build_block_hamiltonian, build_full_hamiltonian, Coefficients};
use aklt_core::numerics::rational_to_f64;
use aklt_core::spectrum::{closed_form_spectrum, saturated_entropy};
use aklt_core::{BigInt, BlockSpectrum, ChainSpec, Error};
use rayon::prelude::*;

use args::{Cli, Command, EntropyArgs, Method, SpectrumArgs, ValidateArgs};

/// Block Hilbert-space dimension up to which brute-force runs also check the
/// ground-space dimension of the block Hamiltonian.
const KERNEL_CHECK_LIMIT: u64 = 2_000;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Parse(String),
    Mismatch(String),
    Unsupported(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Unsupported(_) => 5,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Parse(m) | CliError::Mismatch(m) | CliError::Unsupported(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::Parse(_) | Error::InvalidRenyiOrder(_) => CliError::Parse(text),
            Error::Unsupported(_) => CliError::Unsupported(text),
            Error::Consistency(_) | Error::NormalizationFailure(_) | Error::SpaceMismatch => CliError::Mismatch(text),
            _ => CliError::Invalid(text),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = parse::coefficients(&cli.coeff).and_then(|coeffs| match &cli.command {
        Command::Validate(a) => validate(a, &coeffs, out),
        Command::Spectrum(a) => spectrum(a, &coeffs, cli.max_dim, out, err),
        Command::Entropy(a) => entropy(a, cli.max_dim, out),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn read_chain_file(path: &Path) -> Result<ChainFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_chain(path: &Path) -> Result<ChainSpec, CliError> {
    Ok(read_chain_file(path)?.into_chain()?)
}

fn check_coefficients(chain: &ChainSpec, coeffs: &Coefficients) -> Result<(), CliError> {
    if let Some(key) = coeffs.keys().find(|(bond, _)| *bond >= chain.num_sites() - 1) {
        return Err(CliError::Invalid(format!("--coeff names bond {} but the chain has bonds 0..={}", key.0, chain.num_sites() - 2)));
    }
    build_full_hamiltonian(chain, coeffs)?;
    Ok(())
}

fn validate(a: &ValidateArgs, coeffs: &Coefficients, out: &mut dyn Write) -> Result<(), CliError> {
    let chain = read_chain_file(&a.chain)?.into_unchecked()?;
    let report = chain.validate();
    let name = chain.name().unwrap_or("chain");
    if !report.is_ok() {
        let lines: Vec<String> = report.violations.iter().map(|v| format!("  {v}")).collect();
        return Err(CliError::Invalid(format!("{name} is invalid:\n{}", lines.join("\n"))));
    }
    check_coefficients(&chain, coeffs)?;
    let spins: Vec<String> = chain.spins().iter().map(|s| s.to_string()).collect();
    let bonds: Vec<String> = chain.bonds().iter().map(|m| m.to_string()).collect();
    writeln!(out, "{name}: valid, {} bulk spins", chain.num_bulk())?;
    writeln!(out, "spins: {}", spins.join(" "))?;
    writeln!(out, "bonds: {}", bonds.join(" "))?;
    Ok(())
}

fn ensure_brute_force_feasible(chain: &ChainSpec, max_dim: u64) -> Result<(), CliError> {
    let dim = chain.full_dimension();
    if dim > BigInt::from(max_dim) {
        return Err(CliError::Unsupported(format!(
            "full chain dimension {dim} exceeds the brute-force cap {max_dim}; raise it with --max-dim"
        )));
    }
    Ok(())
}

fn brute_force_spectrum(chain: &ChainSpec, block: &BlockSpec, max_dim: u64) -> Result<BlockSpectrum, CliError> {
    ensure_brute_force_feasible(chain, max_dim)?;
    let rho = reduced_density_matrix(chain, block);
    if block.len() < 2 {
        return Ok(spectrum_by_peeling(&rho, block)?);
    }
    let report = verify_projector_structure(&rho, block);
    match report.spectrum {
        Some(s) if report.failures.is_empty() => Ok(s),
        _ => Err(CliError::Mismatch(format!("density matrix structure: {}", report.failures.join("; ")))),
    }
}

fn kernel_check(block: &BlockSpec, coeffs: &Coefficients, err: &mut dyn Write) -> Result<(), CliError> {
    if block.len() < 2 {
        return Ok(());
    }
    let dim: u64 = block.spins().iter().map(|s| s.multiplicity() as u64).product();
    if dim > KERNEL_CHECK_LIMIT {
        writeln!(err, "note: block dimension {dim} too large for the ground-space check; skipped")?;
        return Ok(());
    }
    let kernel = build_block_hamiltonian(block, coeffs)?.kernel_dimension();
    if kernel as u64 != block.degeneracy() {
        return Err(CliError::Mismatch(format!(
            "block Hamiltonian has {kernel} zero modes, expected {}",
            block.degeneracy()
        )));
    }
    writeln!(err, "block ground space: dimension {kernel}")?;
    Ok(())
}

fn output<'a>(path: Option<&Path>, out: &'a mut dyn Write) -> Result<csv::Writer<Box<dyn Write + 'a>>, CliError> {
    let sink: Box<dyn Write + 'a> = match path {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(out),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn spectrum(
    a: &SpectrumArgs,
    coeffs: &Coefficients,
    max_dim: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let chain = load_chain(&a.chain)?;
    check_coefficients(&chain, coeffs)?;
    let (k, len) = parse::range(&a.block, "--block")?;
    let block = chain.block(k, len)?;

    let closed = match a.method {
        Method::ClosedForm | Method::Both => Some(closed_form_spectrum(&block)?),
        Method::BruteForce => None,
    };
    let brute = match a.method {
        Method::BruteForce | Method::Both => {
            kernel_check(&block, coeffs, err)?;
            Some(brute_force_spectrum(&chain, &block, max_dim)?)
        }
        Method::ClosedForm => None,
    };

    let mut w = output(a.csv.as_deref(), out)?;
    let mut header = vec!["J_twice", "multiplicity", "lambda_num", "lambda_den", "lambda_float"];
    if a.method == Method::Both {
        header.extend(["brute_num", "brute_den", "brute_float", "match"]);
    }
    w.write_record(&header)?;

    let primary = closed.as_ref().or(brute.as_ref()).expect("at least one method ran");
    let mut mismatches = Vec::new();
    let mut js: Vec<_> = primary.iter().map(|(j, _)| j).collect();
    if let Some(b) = &brute {
        js.extend(b.iter().map(|(j, _)| j));
    }
    js.sort();
    js.dedup();
    for j in js {
        let mut row = vec![j.twice().to_string(), j.multiplicity().to_string()];
        let cell = |s: Option<&BlockSpectrum>| match s.and_then(|s| s.get(j)) {
            Some(l) => vec![l.numer().to_string(), l.denom().to_string(), parse::float(rational_to_f64(l))],
            None => vec!["0".into(), "1".into(), "0".into()],
        };
        row.extend(cell(Some(primary)));
        if a.method == Method::Both {
            row.extend(cell(brute.as_ref()));
            let same = closed.as_ref().and_then(|c| c.get(j)) == brute.as_ref().and_then(|b| b.get(j));
            if !same {
                mismatches.push(j);
            }
            row.push(if same { "match" } else { "MISMATCH" }.into());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    if !mismatches.is_empty() {
        let list: Vec<String> = mismatches.iter().map(|j| j.to_string()).collect();
        return Err(CliError::Mismatch(format!("closed form and brute force disagree at J = {}", list.join(", "))));
    }
    Ok(())
}

fn entropy(a: &EntropyArgs, max_dim: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let chain = load_chain(&a.chain)?;
    let (lmin, lmax) = parse::range(&a.sweep, "--sweep")?;
    if lmin < 1 || lmin > lmax {
        return Err(CliError::Parse(format!("--sweep needs 1 ≤ LMIN ≤ LMAX, got {}", a.sweep)));
    }
    if let Some(&bad) = a.alpha.iter().find(|&&x| x.is_nan() || x <= 0.0 || x == 1.0 || x.is_infinite()) {
        return Err(Error::InvalidRenyiOrder(bad).into());
    }
    let blocks: Vec<BlockSpec> =
        (lmin..=lmax).map(|len| chain.block(a.block_start, len)).collect::<Result<_, _>>()?;

    let rows: Vec<Result<Vec<String>, CliError>> = blocks
        .par_iter()
        .map(|block| {
            let spec = if block.len() < 2 {
                brute_force_spectrum(&chain, block, max_dim)?
            } else {
                closed_form_spectrum(block)?
            };
            let svn = spec.von_neumann();
            let saturation = saturated_entropy(block.m_left(), block.m_right());
            let mut row = vec![block.len().to_string(), parse::float(svn)];
            for &alpha in &a.alpha {
                row.push(parse::float(spec.renyi(alpha)?));
            }
            row.push(parse::float(saturation));
            row.push(parse::float(saturation - svn));
            Ok(row)
        })
        .collect();

    let mut w = output(a.csv.as_deref(), out)?;
    let mut header = vec!["L".to_string(), "S_vN".to_string()];
    header.extend(a.alpha.iter().map(|x| format!("S_renyi_{x}")));
    header.extend(["saturation".to_string(), "gap".to_string()]);
    w.write_record(&header)?;
    for row in rows {
        w.write_record(&row?)?;
    }
    w.flush()?;
    Ok(())
}
