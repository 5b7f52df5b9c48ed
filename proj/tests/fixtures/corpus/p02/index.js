const alpha = require('alpha');
const beta = require('beta');

module.exports = { alpha, beta };
