const kappa = require('kappa');
const lambda = require('lambda');

module.exports = kappa.join(lambda);
