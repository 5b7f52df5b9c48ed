const pad = require('left-pad');

async function main() {
  const eta = await import('eta');
  return eta.render(pad('x', 4));
}

main();
