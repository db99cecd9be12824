// Element construction without innerHTML: document text and review comments
// are arbitrary strings and must land in the DOM as text, never as markup.

export type Child = Node | string;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Child[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

export function show(node: HTMLElement, text?: string): void {
  if (text !== undefined) {
    node.textContent = text;
  }
  node.hidden = false;
}

export function hide(node: HTMLElement): void {
  // Children stay: the conflict banner is hidden and reshown with its
  // message and reload button intact. Error boxes get fresh text via show.
  node.hidden = true;
}
