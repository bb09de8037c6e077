import type { AnalysisRecord, Pair, SphereValue } from './types'
import { ServiceError } from './api'

// Analysis panel: shows the service's record verbatim. Formatting only —
// no value shown here is computed client-side.

function fmt(v: SphereValue | Pair | undefined, digits = 6): string {
	if (v === undefined) return '—'
	if (v === 'inf') return '∞'
	const [re, im] = v
	const r = re.toPrecision(digits)
	const i = Math.abs(im).toPrecision(digits)
	return im < 0 ? `${r} − ${i}i` : `${r} + ${i}i`
}

function row(label: string, value: string, cls = ''): string {
	return `<div class="row ${cls}"><span class="label">${label}</span><span class="value">${value}</span></div>`
}

export function renderPanel(el: HTMLElement, record: AnalysisRecord): void {
	const c = record.classification
	const parts: string[] = []
	parts.push(row('λ', fmt(record.lambda, 17)))
	parts.push(row('member of M̃', record.member === null ? 'undetermined' : String(record.member)))
	parts.push(row('orbit', c.kind))
	if (c.period !== undefined && c.period !== null) {
		parts.push(row('period', String(c.period)))
	}
	if (c.prepole_order !== undefined && c.prepole_order !== null) {
		parts.push(row('prepole order', String(c.prepole_order)))
	}
	if (c.multiplier) parts.push(row('cycle multiplier', fmt(c.multiplier)))
	parts.push(row("g′(0)", fmt(record.multipliers.zero)))
	parts.push(row("g′(∞)", fmt(record.multipliers.infinity)))
	for (const p of record.multipliers.pseudo) {
		if (p.sigma === 1 || p.sigma === -1) {
			parts.push(row(`ρ(σ=${p.sigma})`, fmt(p.rho)))
		}
	}
	parts.push(row('μ', fmt(record.mu)))
	parts.push(
		`<div class="diagnosis" data-kind="${record.diagnosis.kind}">${record.diagnosis.text}</div>`,
	)
	parts.push(`<div class="rationale">${record.diagnosis.rationale}</div>`)
	el.innerHTML = parts.join('')
	el.dataset.state = 'record'
}

export function renderPanelError(el: HTMLElement, err: unknown): void {
	if (err instanceof ServiceError && err.isSingularity) {
		el.innerHTML = '<div class="badge singular">parameter singularity</div>'
		el.dataset.state = 'singular'
		return
	}
	const msg = err instanceof Error ? err.message : String(err)
	el.innerHTML = `<div class="badge error">analysis failed: ${msg}</div>`
	el.dataset.state = 'error'
}
